#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "helpers.hpp"
#include "hpcwl/backlog/backlog.hpp"
#include "hpcwl/core/errors.hpp"

namespace hpcwl::backlog {
namespace {

JobRecord qjob(std::string id, UnixSeconds submit, UnixSeconds start, UnixSeconds end,
               std::int64_t nodes = 1, std::int64_t cores = 1, std::string user = "u") {
  auto j = test::job(std::move(id), "R", submit, start, end, nodes, cores);
  j.user = std::move(user);
  return j;
}

// State at instant t recomputed from scratch.
struct Snapshot {
  std::int64_t running_nodes = 0, queued_nodes = 0, queued_core_seconds = 0, queued_jobs = 0;
};

Snapshot brute(const std::vector<JobRecord>& jobs, UnixSeconds t) {
  Snapshot s;
  for (const auto& j : jobs) {
    if (j.submit_time <= t && t < j.start_time) {
      s.queued_nodes += j.nodes;
      s.queued_core_seconds += j.cores * (j.end_time - j.start_time);
      ++s.queued_jobs;
    }
    if (j.start_time <= t && t < j.end_time) s.running_nodes += j.nodes;
  }
  return s;
}

std::vector<JobRecord> random_trace(std::mt19937_64& rng, int n, int horizon_minutes) {
  std::uniform_int_distribution<int> minute(0, horizon_minutes), wait(0, 600), wall(0, 900),
      nodes(1, 32), cpn(1, 4);
  std::vector<JobRecord> jobs;
  for (int i = 0; i < n; ++i) {
    UnixSeconds s = 60LL * minute(rng);
    UnixSeconds st = s + 60LL * wait(rng);
    UnixSeconds e = st + 60LL * wall(rng);
    auto k = nodes(rng);
    jobs.push_back(qjob(std::to_string(i), s, st, e, k, k * cpn(rng), "u" + std::to_string(i % 7)));
  }
  return jobs;
}

TEST(Backlog, OneJobQueuedThenRunning) {
  std::vector<JobRecord> jobs = {qjob("1", 0, 3600, 7200, 2, 10)};
  auto s = backlog_series(jobs, Sampling::event);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_GT(s[0].queued_core_years, 0.0);
  EXPECT_EQ(s[0].queued_core_seconds, 10 * 3600);
  EXPECT_DOUBLE_EQ(s[0].queued_core_years, 10.0 / (24 * 365));
  EXPECT_EQ(s[1].queued_core_years, 0.0);
  EXPECT_EQ(s[1].running_nodes, 2);
  EXPECT_EQ(s[2].running_nodes, 0);
  EXPECT_EQ(s[2].required_nodes, 0);
}

TEST(Backlog, OverlappingQueuedJobsAdd) {
  std::vector<JobRecord> jobs = {qjob("1", 0, 100, 200, 1, 2), qjob("2", 50, 150, 250, 3, 3)};
  auto s = backlog_series(jobs, Sampling::event);
  auto at50 = std::find_if(s.begin(), s.end(), [](const auto& p) { return p.time == 50; });
  ASSERT_NE(at50, s.end());
  EXPECT_EQ(at50->queued_nodes, 4);
  EXPECT_EQ(at50->queued_core_seconds, 2 * 100 + 3 * 100);
}

TEST(Backlog, FiveJobFixtureMatchesMinuteScan) {
  std::vector<JobRecord> jobs = {qjob("a", 0, 600, 1800, 2, 8), qjob("b", 120, 600, 3000, 1, 4),
                                 qjob("c", 300, 2400, 2400, 4, 16), qjob("d", 1800, 1800, 3600, 1, 1),
                                 qjob("e", 2400, 3000, 4200, 8, 32)};
  auto series = backlog_series(jobs, Sampling::event);
  std::set<UnixSeconds> event_times;
  for (const auto& j : jobs) event_times.insert({j.submit_time, j.start_time, j.end_time});
  ASSERT_EQ(series.size(), event_times.size());
  for (UnixSeconds t = 0; t <= 4200; t += 60) {
    if (!event_times.contains(t)) continue;
    auto it = std::find_if(series.begin(), series.end(), [&](const auto& p) { return p.time == t; });
    ASSERT_NE(it, series.end());
    auto b = brute(jobs, t);
    EXPECT_EQ(it->running_nodes, b.running_nodes) << t;
    EXPECT_EQ(it->queued_nodes, b.queued_nodes) << t;
    EXPECT_EQ(it->queued_core_seconds, b.queued_core_seconds) << t;
    EXPECT_EQ(it->required_nodes, b.running_nodes + b.queued_nodes) << t;
  }
}

TEST(BacklogProperty, DailyAgreesWithEventAtSharedTimes) {
  std::mt19937_64 rng(8);
  auto jobs = random_trace(rng, 300, 60 * 24 * 10);
  auto events = backlog_series(jobs, Sampling::event);
  auto daily = backlog_series(jobs, Sampling::daily);
  ASSERT_FALSE(daily.empty());
  for (const auto& d : daily) {
    EXPECT_EQ(d.time % kSecondsPerDay, 0);
    auto b = brute(jobs, d.time);
    EXPECT_EQ(d.running_nodes, b.running_nodes);
    EXPECT_EQ(d.queued_nodes, b.queued_nodes);
    for (const auto& e : events)
      if (e.time == d.time) EXPECT_EQ(e.required_nodes, d.required_nodes);
  }
}

TEST(BacklogProperty, RemovingAJobNeverIncreasesBacklog) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto jobs = random_trace(rng, 60, 3000);
    auto fewer = jobs;
    fewer.erase(fewer.begin() + trial % 60);
    std::set<UnixSeconds> times;
    for (const auto& j : jobs) times.insert({j.submit_time, j.start_time, j.end_time});
    auto full = backlog_series(jobs, Sampling::event);
    auto part = backlog_series(fewer, Sampling::event);
    auto value_at = [](const std::vector<BacklogPoint>& s, UnixSeconds t) {
      BacklogPoint last;
      for (const auto& p : s)
        if (p.time <= t) last = p;
      return last;
    };
    for (auto t : times) {
      auto a = value_at(full, t), b = value_at(part, t);
      EXPECT_LE(b.queued_core_seconds, a.queued_core_seconds);
      EXPECT_LE(b.required_nodes, a.required_nodes);
      EXPECT_LE(b.running_nodes, a.running_nodes);
    }
  }
}

TEST(Backlog, OverCapacityFlagged) {
  std::vector<JobRecord> jobs = {qjob("1", 0, 0, 100, 3), qjob("2", 0, 0, 100, 3)};
  auto s = backlog_series(jobs, Sampling::event, 5);
  EXPECT_TRUE(s[0].over_capacity);
  EXPECT_FALSE(backlog_series(jobs, Sampling::event, 6)[0].over_capacity);
}

TEST(WaitStats, ConstantWaits) {
  std::vector<JobRecord> jobs;
  for (int i = 0; i < 5; ++i) jobs.push_back(qjob(std::to_string(i), 0, 7200, 7200 + 3600 * (i + 1), 1, i + 1));
  auto w = wait_stats("R", jobs);
  EXPECT_EQ(w.q1, 2.0);
  EXPECT_EQ(w.median, 2.0);
  EXPECT_EQ(w.q3, 2.0);
  EXPECT_EQ(w.mean, 2.0);
  EXPECT_DOUBLE_EQ(*w.core_hour_weighted_mean, 2.0);
}

TEST(WaitStats, WeightedMean) {
  std::vector<JobRecord> jobs = {qjob("1", 0, 3600, 7200, 1, 1), qjob("2", 0, 3 * 3600, 4 * 3600, 1, 3)};
  auto w = wait_stats("R", jobs);
  EXPECT_DOUBLE_EQ(w.mean, 2.0);
  EXPECT_DOUBLE_EQ(*w.core_hour_weighted_mean, 2.5);
}

TEST(WaitStats, QuartilesOnEightPoints) {
  std::vector<double> waits = {5, 1, 7, 3, 8, 2, 6, 4};
  std::vector<JobRecord> jobs;
  for (std::size_t i = 0; i < waits.size(); ++i)
    jobs.push_back(qjob(std::to_string(i), 0, static_cast<UnixSeconds>(waits[i] * 3600),
                        static_cast<UnixSeconds>(waits[i] * 3600) + 60));
  auto w = wait_stats("R", jobs);
  // Sorted 1..8; positions 1.75, 3.5, 5.25.
  EXPECT_DOUBLE_EQ(w.q1, 2.75);
  EXPECT_DOUBLE_EQ(w.median, 4.5);
  EXPECT_DOUBLE_EQ(w.q3, 6.25);
}

TEST(WaitStats, EmptyGroup) { EXPECT_THROW(wait_stats("R", {}), EmptyGroup); }

TEST(Capacity, SingleJobOnEmptyMachine) {
  auto r = test::resource("R", 100, 16);
  std::vector<JobRecord> jobs = {qjob("1", 0, 0, 3600, 4, 64)};
  for (double q : {0.01, 0.5, 0.95, 0.99}) {
    auto c = capacity_for_percentile(jobs, r, q);
    EXPECT_EQ(c.nodes, 4);
    EXPECT_EQ(c.cores, 64);
    EXPECT_DOUBLE_EQ(c.node_ratio, 0.04);
  }
  EXPECT_THROW(capacity_for_percentile(jobs, r, 1.0), DegenerateInput);
}

TEST(Capacity, ZeroDurationJobCountsItself) {
  std::vector<JobRecord> jobs = {qjob("1", 100, 100, 100, 7, 7)};
  auto req = required_at_submit(jobs);
  EXPECT_EQ(req[0].nodes, 7);
}

// Nearest-rank quantile of R_j recomputed from scratch.
std::int64_t oracle_capacity(const std::vector<JobRecord>& jobs, double q) {
  std::vector<std::int64_t> r;
  for (const auto& j : jobs) {
    auto b = brute(jobs, j.submit_time);
    std::int64_t need = b.running_nodes + b.queued_nodes;
    bool counted = (j.submit_time < j.start_time) || (j.start_time <= j.submit_time && j.submit_time < j.end_time);
    if (!counted) need += j.nodes;
    r.push_back(need);
  }
  std::sort(r.begin(), r.end());
  auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(r.size())));
  return r[std::max<std::size_t>(k, 1) - 1];
}

TEST(CapacityProperty, TwentyJobFixtureMatchesOracle) {
  std::mt19937_64 rng(21);
  auto jobs = random_trace(rng, 20, 400);
  auto r = test::resource("R", 64, 4);
  for (double q : {0.5, 0.9, 0.95, 0.99}) EXPECT_EQ(capacity_for_percentile(jobs, r, q).nodes, oracle_capacity(jobs, q));
}

TEST(CapacityProperty, MonotoneAndCoversMax) {
  std::mt19937_64 rng(22);
  auto r = test::resource("R", 64, 4);
  for (int trial = 0; trial < 50; ++trial) {
    auto jobs = random_trace(rng, 100, 2000);
    auto c95 = capacity_for_percentile(jobs, r, 0.95);
    auto c99 = capacity_for_percentile(jobs, r, 0.99);
    EXPECT_GE(c99.nodes, c95.nodes);
    EXPECT_GE(c99.cores, c95.cores);
    std::int64_t max_required = 0;
    for (const auto& q : required_at_submit(jobs)) max_required = std::max(max_required, q.nodes);
    EXPECT_GE(capacity_for_percentile(jobs, r, 1.0 - 1e-12).nodes, max_required);
    auto t95 = capacity_for_percentile(jobs, r, 0.95, true);
    auto t99 = capacity_for_percentile(jobs, r, 0.99, true);
    EXPECT_TRUE(t95.time_weighted);
    EXPECT_GE(t99.nodes, t95.nodes);
  }
}

TEST(UserQueueDepth, OverlapAndSequence) {
  std::vector<JobRecord> jobs = {qjob("1", 0, 10, 100, 1, 1, "a"), qjob("2", 5, 10, 100, 1, 1, "a"),
                                 qjob("3", 6, 50, 60, 1, 1, "a"), qjob("4", 0, 0, 10, 1, 1, "b"),
                                 qjob("5", 10, 10, 20, 1, 1, "b"), qjob("6", 20, 25, 30, 1, 1, "b")};
  auto d = user_queue_depth(jobs, {"b"});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].user, "a");
  EXPECT_EQ(d[0].max_concurrent, 3);
  EXPECT_EQ(d[0].total_jobs, 3);
  EXPECT_FALSE(d[0].community);
  EXPECT_EQ(d[1].max_concurrent, 1);
  EXPECT_TRUE(d[1].community);
}

TEST(UserQueueDepthProperty, MatchesSweepOracle) {
  std::mt19937_64 rng(23);
  auto jobs = random_trace(rng, 200, 1000);
  auto d = user_queue_depth(jobs);
  for (const auto& row : d) {
    std::int64_t best = 0;
    for (const auto& j : jobs) {
      if (j.user != row.user) continue;
      std::int64_t c = 0;
      for (const auto& k : jobs)
        if (k.user == row.user && k.submit_time <= j.submit_time && j.submit_time < k.end_time) ++c;
      best = std::max(best, c);
    }
    EXPECT_EQ(row.max_concurrent, best) << row.user;
  }
}

}  // namespace
}  // namespace hpcwl::backlog
