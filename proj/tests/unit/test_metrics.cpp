#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "hpcwl/core/errors.hpp"
#include "hpcwl/ingest/su.hpp"
#include "hpcwl/metrics/allocation.hpp"
#include "hpcwl/metrics/apps.hpp"
#include "hpcwl/metrics/concurrency.hpp"
#include "hpcwl/metrics/depth.hpp"
#include "hpcwl/metrics/gateway.hpp"
#include "hpcwl/metrics/geo.hpp"
#include "hpcwl/metrics/jobsize.hpp"
#include "hpcwl/metrics/lustre.hpp"
#include "hpcwl/metrics/memory.hpp"
#include "hpcwl/metrics/rollup.hpp"

namespace hpcwl::metrics {
namespace {

using test::at;
constexpr double GiB = 1024.0 * 1024 * 1024;

AllocationRecord alloc(std::string cn, double awarded, double used, std::string res = "R") {
  AllocationRecord a;
  a.charge_number = std::move(cn);
  a.resource = std::move(res);
  a.awarded_local_su = awarded;
  a.used_local_su = used;
  a.award_date = Date(2015, 1, 1);
  return a;
}

ResourceMap single_resource(std::int64_t nodes = 100, std::int64_t cpn = 16, double factor = 1.0) {
  ResourceMap m;
  auto r = test::resource("R", nodes, cpn, factor);
  r.mem_per_node = static_cast<std::uint64_t>(64 * GiB);
  r.large_memory_queues = {"largemem"};
  m.emplace("R", r);
  return m;
}

// ---- allocations

TEST(Allocation, UtilizationAndUnused) {
  std::vector<AllocationRecord> a = {alloc("A", 100, 100), alloc("B", 100, 0)};
  auto s = allocation_stats("all", a);
  EXPECT_EQ(s.utilization_pct, std::optional<double>(50.0));
  EXPECT_EQ(s.n_unused, 1u);
  EXPECT_EQ(s.n_alloc, 2u);
}

TEST(Allocation, OverchargePassesThrough) {
  std::vector<AllocationRecord> a = {alloc("A", 100, 120)};
  EXPECT_EQ(allocation_stats("all", a).utilization_pct, std::optional<double>(120.0));
}

TEST(Allocation, EmptyGroupThrows) {
  EXPECT_THROW(allocation_stats("x", std::span<const AllocationRecord>{}), EmptyGroup);
}

TEST(Allocation, SummaryStatistics) {
  std::vector<AllocationRecord> a = {alloc("A", 10, 5), alloc("B", 20, 5), alloc("C", 60, 5)};
  auto s = allocation_stats("all", a);
  EXPECT_DOUBLE_EQ(s.mean, 30.0);
  EXPECT_DOUBLE_EQ(s.median, 20.0);
  EXPECT_DOUBLE_EQ(s.variance, 700.0);  // ((-20)^2 + (-10)^2 + 30^2) / 2
}

TEST(Allocation, TopFractionKeepsTies) {
  std::vector<AllocationRecord> a;
  for (int i = 0; i < 10; ++i) a.push_back(alloc("P" + std::to_string(i), i < 3 ? 500 : 10 * i, 0));
  // ceil(0.2 * 10) = 2nd largest is 500, shared by three allocations.
  EXPECT_EQ(top_fraction(a, 0.2).size(), 3u);
  EXPECT_EQ(top_fraction(a, 0.01).size(), 3u);
  auto summary = allocation_size_summary(a);
  ASSERT_EQ(summary.size(), 5u);
  EXPECT_EQ(summary[0].group, "All");
}

TEST(Allocation, GroupByResourceSorted) {
  std::vector<AllocationRecord> a = {alloc("A", 1, 1, "Z"), alloc("B", 1, 1, "A")};
  auto rows = allocation_utilization(a, AllocGroupBy::resource);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].group, "A");
}

// ---- rollups

TEST(Rollup, SingleParentScienceTakesWholeQuarter) {
  auto res = single_resource();
  auto j1 = test::job("1", "R", at(2015, 1, 2), at(2015, 1, 2), at(2015, 1, 3));
  auto j2 = test::job("2", "R", at(2015, 2, 2), at(2015, 2, 2), at(2015, 2, 3));
  j1.local_su_charged = 30;
  j2.local_su_charged = 70;
  j1.project.parent_science = j2.project.parent_science = "Chemistry";
  std::vector<JobRecord> jobs = {j1, j2};
  auto r = usage_rollup(jobs, res, Dimension::parent_science, WeightKind::xd_su, Period::quarter);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].period, "2015-Q1");
  EXPECT_DOUBLE_EQ(r.rows[0].total, 100.0);
  EXPECT_DOUBLE_EQ(r.rows[0].share_pct, 100.0);
}

TEST(Rollup, UnconvertibleJobsReported) {
  auto res = single_resource();
  auto j = test::job("old", "R", at(1999, 1, 1), at(1999, 1, 1), at(1999, 1, 2));
  std::vector<JobRecord> jobs = {j};
  auto r = usage_rollup(jobs, res, Dimension::resource, WeightKind::xd_su, Period::year);
  EXPECT_EQ(r.unconverted_jobs, std::vector<std::string>{"old"});
}

TEST(RollupProperty, SharesSumTo100PerPeriod) {
  auto res = single_resource(1000, 16, 2.5);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> day(0, 700), cores(1, 512), wall(1, 48), sci(0, 6);
  std::vector<JobRecord> jobs;
  for (int i = 0; i < 2000; ++i) {
    auto s = at(2015, 1, 1) + day(rng) * 86400LL;
    auto j = test::job(std::to_string(i), "R", s, s, s + wall(rng) * 3600LL, 1, cores(rng));
    j.project.parent_science = "S" + std::to_string(sci(rng));
    jobs.push_back(j);
  }
  for (auto period : {Period::quarter, Period::year}) {
    for (auto weight : {WeightKind::count, WeightKind::core_hours, WeightKind::xd_su}) {
      auto r = usage_rollup(jobs, res, Dimension::parent_science, weight, period);
      std::map<std::string, double> sums;
      for (const auto& row : r.rows) sums[row.period] += row.share_pct;
      for (const auto& [p, s] : sums) EXPECT_NEAR(s, 100.0, 1e-6) << p;
    }
  }
}

// ---- job sizes

TEST(JobSize, DefaultBinsAreClosedOpenPowersOfTwo) {
  auto edges = default_job_size_edges();
  EXPECT_EQ(edges[0], 1.0);
  EXPECT_EQ(edges[1], 2.0);
  EXPECT_EQ(edges[2], 3.0);
  EXPECT_EQ(edges[3], 5.0);
  EXPECT_EQ(edges.back(), 131073.0);
}

TEST(JobSize, SingleCoreJobInBinOne) {
  auto res = single_resource();
  std::vector<JobRecord> jobs = {test::job("1", "R", 0, at(2015, 1, 1), at(2015, 1, 1, 2))};
  auto h = job_size_distribution(jobs, res, WeightKind::core_hours);
  EXPECT_EQ(h.labels[0], "1");
  EXPECT_EQ(h.labels[1], "2");
  EXPECT_EQ(h.labels[2], "3-4");
  EXPECT_EQ(h.weights[0], 2.0);
  EXPECT_EQ(h.total(), 2.0);
}

TEST(EffectiveCores, StampedeAgainstKraken) {
  const auto& res = test::xsede_resources();
  auto j = test::job("1", "TACC-STAMPEDE", at(2015, 1, 1), at(2015, 1, 1), at(2015, 1, 1, 1), 1, 16);
  EXPECT_NEAR(effective_cores(j, res, kDefaultKrakenFactor), 16 * 4.599 / 2.04, 1e-12);
  EXPECT_NEAR(effective_cores(j, res, kDefaultKrakenFactor), 36.07, 0.005);
}

TEST(EffectiveCores, NodeHourResourceUsesPerCoreFactor) {
  const auto& res = test::xsede_resources();
  auto j = test::job("1", "TACC-STAMPEDE2", at(2018, 1, 1), at(2018, 1, 1), at(2018, 1, 1, 1), 1, 68);
  EXPECT_NEAR(effective_cores(j, res, 2.04), 68 * (143.719 / 68) / 2.04, 1e-9);
}

TEST(AverageJobSize, AllKrakenEffectiveEqualsActual) {
  const auto& res = test::xsede_resources();
  std::vector<JobRecord> jobs;
  for (int i = 1; i <= 20; ++i) {
    auto s = at(2012, 1, 1) + i * 86400LL;
    auto j = test::job(std::to_string(i), "NICS-KRAKEN", s, s, s + 3600 * i, 1, 12 * i);
    jobs.push_back(j);
  }
  for (bool weighted : {false, true})
    EXPECT_NEAR(average_job_size(jobs, res, weighted, true), average_job_size(jobs, res, weighted, false),
                1e-9 * average_job_size(jobs, res, weighted, false));
}

TEST(AverageJobSize, EmptyInputIsDegenerate) {
  EXPECT_THROW(average_job_size({}, test::xsede_resources(), false, false), DegenerateInput);
}

TEST(SingleNode, AllSingleNodeIsHundredPercent) {
  auto res = single_resource();
  std::vector<JobRecord> jobs = {test::job("1", "R", 0, at(2015, 1, 1), at(2015, 1, 2), 1, 4),
                                 test::job("2", "R", 0, at(2015, 1, 1), at(2015, 1, 2), 1, 1)};
  auto rows = single_node_serial_fractions(jobs, res, false, Period::year);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].pct_jobs_single_node, 100.0);
  EXPECT_DOUBLE_EQ(rows[0].pct_xd_su_serial, 100.0 / 5.0);
}

// ---- depth and joint ratio

TEST(Depth, ProjectDepthIsMax) {
  auto a = test::job("1", "R", 0, 0, 3600, 1, 8);
  auto b = test::job("2", "R", 0, 0, 3600, 64, 1024);
  std::vector<JobRecord> jobs = {a, b};
  auto p = depth_profile(jobs, DepthBy::cores);
  ASSERT_EQ(p.projects.size(), 1u);
  EXPECT_EQ(p.projects[0].depth, 1024);
  EXPECT_EQ(p.projects[0].job_count, 2);
  EXPECT_DOUBLE_EQ(p.projects[0].usage, 8 + 1024);
  EXPECT_EQ(depth_profile(jobs, DepthBy::nodes).projects[0].depth, 64);
}

DepthProfile profile(std::vector<std::pair<std::int64_t, double>> depth_usage) {
  DepthProfile p;
  int i = 0;
  for (auto [d, u] : depth_usage) p.projects.push_back({"P" + std::to_string(i++), d, u, 1});
  return p;
}

TEST(JointRatio, SymmetricPair) {
  auto r = joint_ratio(profile({{1, 5}, {100, 5}}));
  EXPECT_EQ(r.label(), "50:50");
  EXPECT_EQ(r.depth_at_ratio, 1);
}

TEST(JointRatio, SkewedFour) {
  auto r = joint_ratio(profile({{1, 10}, {2, 10}, {4, 10}, {8, 70}}));
  EXPECT_EQ(r.deep_usage_pct, 70);
  EXPECT_EQ(r.deep_projects_pct, 30);
  EXPECT_EQ(r.depth_at_ratio, 4);
  EXPECT_EQ(r.projects_at_ratio, 1u);
}

TEST(JointRatio, SingleProjectDegenerate) {
  auto r = joint_ratio(profile({{64, 3}}));
  EXPECT_EQ(r.deep_usage_pct, 0);
  EXPECT_EQ(r.deep_projects_pct, 100);
  EXPECT_EQ(r.depth_at_ratio, 64);
}

TEST(JointRatio, EmptyProfileThrows) {
  EXPECT_THROW(joint_ratio(DepthProfile{}), EmptyProfile);
  EXPECT_THROW(joint_ratio(profile({{4, 0}})), EmptyProfile);
}

struct OracleRatio {
  int deep_pct;
  std::int64_t depth;
  std::size_t deep_projects;
  std::int64_t deep_jobs;
};

// Exhaustive scan with integer usages: every observed depth is tried in ascending order,
// the first one with N*count_le + N*... evaluated exactly in integers wins.
OracleRatio oracle_joint_ratio(const std::vector<std::int64_t>& depths,
                               const std::vector<std::int64_t>& usages,
                               const std::vector<std::int64_t>& jobs) {
  std::int64_t n = static_cast<std::int64_t>(depths.size());
  std::int64_t total = std::accumulate(usages.begin(), usages.end(), std::int64_t{0});
  std::vector<std::int64_t> candidates = depths;
  std::sort(candidates.begin(), candidates.end());
  std::int64_t best = candidates.back();
  for (auto d : candidates) {
    std::int64_t count = 0, usage = 0;
    for (std::size_t i = 0; i < depths.size(); ++i)
      if (depths[i] <= d) {
        ++count;
        usage += usages[i];
      }
    // count/n + usage/total >= 1
    if (count * total + usage * n >= n * total) {
      best = d;
      break;
    }
  }
  OracleRatio o{0, best, 0, 0};
  std::int64_t deep_usage = 0;
  for (std::size_t i = 0; i < depths.size(); ++i)
    if (depths[i] > best) {
      deep_usage += usages[i];
      ++o.deep_projects;
      o.deep_jobs += jobs[i];
    }
  // Round half away from zero of 100 * deep / total.
  o.deep_pct = static_cast<int>((200 * deep_usage + total) / (2 * total));
  return o;
}

TEST(JointRatioProperty, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> n_projects(1, 8), depth_pick(0, 11), usage(0, 1000), jobs(1, 9);
  const std::int64_t depth_values[] = {1, 2, 4, 8, 16, 24, 64, 128, 1023, 1135, 4096, 16384};
  for (int trial = 0; trial < 1000; ++trial) {
    int n = n_projects(rng);
    std::vector<std::int64_t> d, u, k;
    DepthProfile p;
    for (int i = 0; i < n; ++i) {
      d.push_back(depth_values[depth_pick(rng)]);
      u.push_back(usage(rng));
      k.push_back(jobs(rng));
      p.projects.push_back({"P" + std::to_string(i), d.back(), static_cast<double>(u.back()), k.back()});
    }
    if (std::accumulate(u.begin(), u.end(), std::int64_t{0}) == 0) continue;
    auto got = joint_ratio(p);
    auto want = oracle_joint_ratio(d, u, k);
    EXPECT_EQ(got.deep_usage_pct, want.deep_pct) << trial;
    EXPECT_EQ(got.deep_usage_pct + got.deep_projects_pct, 100);
    EXPECT_EQ(got.depth_at_ratio, want.depth) << trial;
    EXPECT_EQ(got.projects_at_ratio, want.deep_projects) << trial;
    EXPECT_EQ(got.jobs_at_ratio, want.deep_jobs) << trial;

    for (double c : {0.5, 2.0, 3.0, 1024.0}) {
      DepthProfile scaled = p;
      for (auto& q : scaled.projects) q.usage *= c;
      auto s = joint_ratio(scaled);
      EXPECT_EQ(s.depth_at_ratio, got.depth_at_ratio);
      EXPECT_EQ(s.deep_usage_pct, got.deep_usage_pct);
    }
  }
}

TEST(WidthCurves, SingleProjectStep) {
  auto w = width_curves(profile({{32, 7}}));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].depth, 32);
  EXPECT_EQ(w[0].projects, 1.0);
  EXPECT_EQ(w[0].usage, 1.0);
}

TEST(WidthCurvesProperty, NondecreasingAndEndAtOne) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> n(1, 40), d(1, 5000), u(0, 100000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::int64_t, double>> du;
    int k = n(rng);
    for (int i = 0; i < k; ++i) du.push_back({d(rng), static_cast<double>(u(rng)) + 1});
    auto w = width_curves(profile(du));
    for (std::size_t i = 1; i < w.size(); ++i) {
      EXPECT_LT(w[i - 1].depth, w[i].depth);
      EXPECT_LE(w[i - 1].projects, w[i].projects);
      EXPECT_LE(w[i - 1].jobs, w[i].jobs);
      EXPECT_LE(w[i - 1].usage, w[i].usage);
    }
    EXPECT_NEAR(w.back().projects, 1.0, 1e-12);
    EXPECT_NEAR(w.back().usage, 1.0, 1e-12);
    EXPECT_NEAR(w.back().jobs, 1.0, 1e-12);
  }
}

// ---- histograms

TEST(Histogram, EdgesAndSpecialBuckets) {
  auto h = Histogram1D::make({0, 1, 2}, WeightKind::count);
  h.add(-1, 1);
  h.add(0, 2);
  h.add(1.5, 3);
  h.add(2, 4);
  h.add_absent(5);
  EXPECT_EQ(h.underflow, 1.0);
  EXPECT_EQ(h.weights[0], 2.0);
  EXPECT_EQ(h.weights[1], 3.0);
  EXPECT_EQ(h.overflow, 4.0);
  EXPECT_EQ(h.absent, 5.0);
  EXPECT_EQ(h.total(), 15.0);
  EXPECT_THROW(Histogram1D::make({1, 1}, WeightKind::count), DegenerateInput);
  EXPECT_THROW(h.add(0.5, -1), DegenerateInput);
}

TEST(Histogram, LogEdges) {
  auto e = log_edges(0, 2, 2);
  ASSERT_EQ(e.size(), 5u);
  EXPECT_EQ(e[0], 1.0);
  EXPECT_EQ(e[2], 10.0);
  EXPECT_EQ(e[4], 100.0);
}

perf::JobPerfSummary summary_with_mem(double avg, double max, double node_total = 64 * GiB) {
  perf::JobPerfSummary s;
  s.mem_avg_per_core = avg;
  s.mem_max_per_core = max;
  s.node_mem_total = node_total;
  return s;
}

TEST(MemoryHistogram, SingleJobOneBin) {
  auto res = single_resource();
  auto j = test::job("1", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 100 * 3600, 1, 1);
  auto s = summary_with_mem(1 * GiB, 1 * GiB);
  std::vector<JobView> v = {{&j, &s}};
  auto h = memory_histogram(v, res, MemoryMode::per_core_avg);
  double nonzero = 0;
  for (double w : h.weights)
    if (w > 0) {
      EXPECT_EQ(w, 100.0);
      ++nonzero;
    }
  EXPECT_EQ(nonzero, 1);
  EXPECT_EQ(h.absent, 0.0);
}

TEST(MemoryHistogram, AbsentMemory) {
  auto res = single_resource();
  auto j = test::job("1", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 7200, 1, 3);
  std::vector<JobView> v = {{&j, nullptr}};
  auto h = memory_histogram(v, res, MemoryMode::per_core_max);
  EXPECT_EQ(h.absent, 6.0);
  EXPECT_EQ(h.binned_total(), 0.0);
}

TEST(Memory2D, WholeSystemJobAtXOne) {
  auto res = single_resource(10, 16);
  auto j = test::job("1", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 3600, 10, 160);
  auto s = summary_with_mem(1 * GiB, 2 * GiB);
  std::vector<JobView> v = {{&j, &s}};
  auto h = memory_2d(v, res, MemXAxis::fraction_cores_of_system, MemYAxis::fraction_mem_used,
                     WeightKind::count);
  double found = 0;
  for (std::size_t ix = 0; ix < h.nx(); ++ix)
    for (std::size_t iy = 0; iy < h.ny(); ++iy)
      if (h.at(ix, iy) > 0) {
        EXPECT_EQ(h.x_edges[ix + 1], 1.0);
        found += h.at(ix, iy);
      }
  EXPECT_EQ(found, 1.0);
}

TEST(LargeMemory, ThresholdsByQueue) {
  auto res = single_resource(10, 16);
  auto normal = test::job("1", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 3600, 1, 16);
  auto large = test::job("2", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 3600, 1, 16);
  large.queue = "largemem";
  normal.project.parent_science = large.project.parent_science = "Biology";
  // 16 cores: 0.85 and 0.05 of 64 GiB.
  auto s85 = summary_with_mem(1 * GiB, 0.85 * 64 * GiB / 16);
  auto s05 = summary_with_mem(1 * GiB, 0.05 * 64 * GiB / 16);
  std::vector<JobView> v = {{&normal, &s85}, {&large, &s05}};
  auto r = large_memory_breakdown(v, res, LargeMemGroup::parent_science);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].normal_queue_xd_su, normal.local_su_charged);
  EXPECT_EQ(r.rows[0].large_queue_xd_su, 0.0);
}

TEST(Lustre, PerNodeHourNormalization) {
  auto res = single_resource();
  auto j = test::job("1", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 3600, 2, 32);
  perf::JobPerfSummary s;
  s.lustre_rx = 10e9;
  s.lustre_tx = 0;
  std::vector<JobView> v = {{&j, &s}};
  auto d = lustre_stats(v, res, LustreNormalize::per_node_hour, WeightKind::count);
  auto& h = d.read_bytes;
  bool found = false;
  for (std::size_t i = 0; i < h.weights.size(); ++i)
    if (h.weights[i] > 0) {
      EXPECT_LE(h.edges[i], 5e9);
      EXPECT_GT(h.edges[i + 1], 5e9);
      found = true;
    }
  EXPECT_TRUE(found);
  EXPECT_EQ(d.write_bytes.underflow, 1.0);  // zero bytes is below the first log edge
}

TEST(Concurrency, RunnableMedianBucket) {
  auto res = single_resource(10, 16);
  auto j = test::job("1", "R", 0, 0, 3600, 1, 16);
  perf::JobPerfSummary s;
  s.runnable_threads_median = 16;
  std::vector<JobView> v = {{&j, &s}};
  auto h = runnable_threads_histogram(v, res);
  EXPECT_EQ(h.labels[16], "16");
  EXPECT_EQ(h.weights[16], 1.0);
}

TEST(Concurrency, ProcessBands) {
  ResourceMap res;
  res.emplace("S2", test::resource("S2", 10, 68));
  auto j = test::job("1", "S2", at(2016, 1, 1), at(2016, 1, 1), at(2016, 1, 1, 1), 1, 68);
  perf::JobPerfSummary s;
  s.processes_per_node = 40;
  std::vector<JobView> v = {{&j, &s}};
  auto rows = process_bands(v, res);
  auto it = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.jobs > 0; });
  ASSERT_NE(it, rows.end());
  EXPECT_EQ(it->band, ">32<=68");
}

// ---- conservation property over every 1-D / 2-D histogram family

TEST(HistogramProperty, ConservesPopulationWeight) {
  auto res = single_resource(64, 16, 3.0);
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> nodes(1, 64), wall(0, 72 * 3600);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<JobRecord> jobs;
    std::vector<perf::JobPerfSummary> sums;
    for (int i = 0; i < 300; ++i) {
      auto n = nodes(rng);
      auto s = at(2015, 1, 1) + i * 600;
      auto j = test::job(std::to_string(i), "R", s, s, s + wall(rng), n, n * 16);
      j.local_su_charged = j.core_hours();
      jobs.push_back(j);
      perf::JobPerfSummary p;
      if (u(rng) < 0.7) {
        double avg = u(rng) * 4 * GiB, mx = avg * (1 + u(rng));
        p.mem_avg_per_core = avg;
        p.mem_max_per_core = mx;
        p.node_mem_total = 64 * GiB;
        p.cpu_user_fraction = u(rng);
      }
      if (u(rng) < 0.6) {
        p.lustre_rx = u(rng) * 1e12;
        p.lustre_tx = u(rng) * 1e10;
        p.file_opens = std::floor(u(rng) * 1e5);
      }
      if (u(rng) < 0.5) p.runnable_threads_median = std::floor(u(rng) * 20);
      sums.push_back(p);
    }
    std::vector<JobView> views;
    for (std::size_t i = 0; i < jobs.size(); ++i) views.push_back({&jobs[i], &sums[i]});

    auto expected = [&](WeightKind k) {
      double t = 0;
      for (const auto& j : jobs) {
        switch (k) {
          case WeightKind::count: t += 1; break;
          case WeightKind::core_hours: t += j.cores * (j.end_time - j.start_time) / 3600.0; break;
          case WeightKind::node_hours: t += j.nodes * (j.end_time - j.start_time) / 3600.0; break;
          case WeightKind::xd_su: t += j.local_su_charged * 3.0; break;
        }
      }
      return t;
    };
    auto check = [&](double total, WeightKind k, const char* what) {
      double e = expected(k);
      EXPECT_LE(std::abs(total - e), 1e-9 * std::max(1.0, e)) << what;
    };
    for (auto k : {WeightKind::count, WeightKind::core_hours, WeightKind::node_hours, WeightKind::xd_su}) {
      check(job_size_distribution(jobs, res, k).total(), k, "job sizes");
      check(memory_histogram(views, res, MemoryMode::per_core_avg, k).total(), k, "memory avg");
      check(memory_histogram(views, res, MemoryMode::per_core_max, k).total(), k, "memory max");
      for (auto x : {MemXAxis::fraction_cores_of_system, MemXAxis::cpu_user_fraction, MemXAxis::nodes})
        for (auto y : {MemYAxis::fraction_mem_used, MemYAxis::total_peak_mem})
          check(memory_2d(views, res, x, y, k).total(), k, "memory 2d");
    }
    for (auto k : {WeightKind::count, WeightKind::node_hours})
      for (auto norm : {LustreNormalize::per_job, LustreNormalize::per_node_hour}) {
        auto d = lustre_stats(views, res, norm, k);
        for (const auto* h : {&d.opens, &d.read_bytes, &d.write_bytes, &d.read_rate, &d.write_rate})
          check(h->total(), k, "lustre");
      }
    check(runnable_threads_histogram(views, res).total(), WeightKind::node_hours, "runnable");
  }
}

// ---- gateways

struct GatewayFixture {
  ResourceMap res = single_resource();
  CommunityUserMap community = {{"cipres", "CIPRES"}};
  std::vector<AllocationRecord> allocs;
  std::vector<JobRecord> jobs;

  GatewayFixture() {
    auto gw = test::job("g1", "R", at(2016, 1, 1), at(2016, 1, 1), at(2016, 1, 1, 1));
    gw.user = "cipres";
    gw.charge_number = "TG-CIP";
    gw.gateway_user = "enduser";
    auto personal = test::job("p1", "R", at(2016, 1, 1), at(2016, 1, 1), at(2016, 1, 1, 2));
    personal.user = "dev";
    personal.charge_number = "TG-CIP";
    auto other = test::job("o1", "R", at(2016, 1, 1), at(2016, 1, 1), at(2016, 1, 1, 4));
    other.user = "x";
    other.charge_number = "TG-OTHER";
    jobs = {gw, personal, other};
    allocs = {alloc("TG-CIP", 100, 10), alloc("TG-OTHER", 100, 10)};
    allocs[1].is_gateway_tagged = true;
  }
};

TEST(Gateway, CommunityUserVsAssociatedAllocation) {
  GatewayFixture f;
  auto cu = gateway_usage(f.jobs, f.allocs, f.res, f.community, GatewayMode::community_user);
  ASSERT_EQ(cu.rows.size(), 1u);
  EXPECT_EQ(cu.rows[0].gateway, "CIPRES");
  EXPECT_EQ(cu.rows[0].job_count, 1u);
  auto aa = gateway_usage(f.jobs, f.allocs, f.res, f.community, GatewayMode::associated_allocation);
  ASSERT_EQ(aa.rows.size(), 1u);
  EXPECT_EQ(aa.rows[0].job_count, 2u);
  auto tagged = gateway_usage(f.jobs, f.allocs, f.res, f.community, GatewayMode::gateway_tagged);
  ASSERT_EQ(tagged.rows.size(), 1u);
  EXPECT_EQ(tagged.rows[0].gateway, "TG-OTHER");
}

TEST(Gateway, CommunityFileParsing) {
  std::istringstream in("CIPRES\tcipres\nSciGaP\tscigap\n");
  auto m = parse_community_users(in);
  EXPECT_EQ(m.at("cipres"), "CIPRES");
  EXPECT_EQ(m.at("scigap"), "SciGaP");
}

TEST(Census, NewOnlyInFirstPeriod) {
  ResourceMap res = single_resource();
  auto q1 = test::job("1", "R", at(2016, 1, 5), at(2016, 1, 5), at(2016, 1, 6));
  auto q2 = test::job("2", "R", at(2016, 4, 5), at(2016, 4, 5), at(2016, 4, 6));
  std::vector<JobRecord> jobs = {q1, q2};
  auto rows = gateway_census(jobs, {}, Period::quarter);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].active_hpc_users, 1u);
  EXPECT_EQ(rows[0].new_hpc_users, 1u);
  EXPECT_EQ(rows[1].active_hpc_users, 1u);
  EXPECT_EQ(rows[1].new_hpc_users, 0u);
  EXPECT_TRUE(rows[0].new_gateway_lower_bound == false);
}

TEST(Census, SameEndUserOnTwoGatewaysCountsTwice) {
  CommunityUserMap community = {{"cipres", "CIPRES"}, {"scigap", "SciGaP"}};
  auto a = test::job("1", "R", at(2016, 1, 5), at(2016, 1, 5), at(2016, 1, 6));
  auto b = a;
  a.user = "cipres";
  b.user = "scigap";
  a.gateway_user = b.gateway_user = "same@example.org";
  std::vector<JobRecord> jobs = {a, b};
  auto rows = gateway_census(jobs, community, Period::quarter, Date(2015, 4, 1));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].active_gateway_users, 2u);
  auto early = gateway_census(jobs, community, Period::quarter, Date(2017, 1, 1));
  EXPECT_TRUE(early[0].new_gateway_lower_bound);
}

std::vector<JobRecord> conversion_jobs(UnixSeconds gw_time, UnixSeconds personal_time, int n_personal) {
  std::vector<JobRecord> jobs;
  auto g = test::job("g", "R", gw_time, gw_time, gw_time + 60);
  g.user = "cipres";
  g.gateway_user = "eu";
  jobs.push_back(g);
  for (int i = 0; i < n_personal; ++i) {
    auto t = personal_time + i * 3600;
    auto p = test::job("p" + std::to_string(i), "R", t, t, t + 60);
    p.user = "u-personal";
    jobs.push_back(p);
  }
  return jobs;
}

TEST(Conversion, Rules) {
  CommunityUserMap community = {{"cipres", "CIPRES"}};
  EmailMap emails = {{"CIPRES/eu", "eu@example.org"}, {"u-personal", "eu@example.org"}};
  auto ok = gateway_conversion(conversion_jobs(at(2015, 3, 1), at(2017, 3, 1), 47), community, emails);
  ASSERT_EQ(ok.size(), 1u);
  EXPECT_EQ(ok[0].xsede_job_count, 47u);
  EXPECT_EQ(ok[0].gateway, "CIPRES");
  EXPECT_TRUE(gateway_conversion(conversion_jobs(at(2015, 3, 1), at(2017, 3, 1), 10), community, emails).empty());
  EXPECT_TRUE(gateway_conversion(conversion_jobs(at(2017, 3, 1), at(2015, 3, 1), 47), community, emails).empty());
}

// ---- geography

TEST(Geo, PerCapitaAndTechIndex) {
  StateTable usage = {{"AA", 10e6}, {"BB", 5.0}, {"CC", 8.0}};
  StateTable pop = {{"AA", 10e6}, {"BB", 10.0}};
  StateTable tech = {{"AA", 2.0}, {"BB", 0.0}};
  auto rows = geo_normalize(usage, pop, tech);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].state, "AA");
  EXPECT_EQ(rows[0].per_capita, std::optional<double>(1.0));
  EXPECT_EQ(rows[0].per_capita_tech, std::optional<double>(0.5));
  EXPECT_FALSE(rows[0].missing_divisor);
  EXPECT_EQ(rows[1].per_capita, std::optional<double>(0.5));
  EXPECT_FALSE(rows[1].per_capita_tech);
  EXPECT_TRUE(rows[1].missing_divisor);
  EXPECT_EQ(rows[2].usage, 8.0);
  EXPECT_FALSE(rows[2].per_capita);
  EXPECT_TRUE(rows[2].missing_divisor);
}

TEST(Geo, StateTableCsv) {
  std::istringstream in("state,value\nTX,28700000\nCA,39500000\n");
  auto t = parse_state_table(in);
  EXPECT_EQ(t.at("TX"), 28700000.0);
  EXPECT_EQ(t.size(), 2u);
}

// ---- application usage

TEST(AppUsage, GroupsByReportedLabel) {
  auto res = single_resource();
  auto a = test::job("1", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 3600, 1, 16);
  auto b = test::job("2", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 3600, 1, 16);
  auto c = test::job("3", "R", 0, at(2015, 1, 1), at(2015, 1, 1) + 3600, 1, 16);
  perf::JobPerfSummary sa, sb;
  sa.app = {"VASP", true};
  sb.app = {"NAMD", false};
  std::vector<JobView> v = {{&a, &sa}, {&b, &sb}, {&c, nullptr}};
  auto rows = app_usage(v, res);
  ASSERT_EQ(rows.size(), 3u);
  std::set<std::string> labels;
  for (const auto& r : rows) labels.insert(r.app);
  EXPECT_EQ(labels, (std::set<std::string>{"NAMD", "NA", "proprietary-masked"}));
}

}  // namespace
}  // namespace hpcwl::metrics
