#include "hpcwl/backlog/backlog.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hpcwl/core/errors.hpp"
#include "hpcwl/core/stats.hpp"

namespace hpcwl::backlog {

namespace {

constexpr double kCoreSecondsPerCoreYear = 3600.0 * kHoursPerYear;

struct Delta {
  UnixSeconds time;
  std::int64_t q_nodes, q_cores, q_core_seconds, q_jobs;
  std::int64_t r_nodes, r_cores, r_jobs;
};

std::vector<Delta> deltas_of(std::span<const JobRecord> jobs) {
  std::vector<Delta> d;
  d.reserve(jobs.size() * 3);
  for (const auto& j : jobs) {
    std::int64_t cs = j.cores * j.wall_seconds();
    d.push_back({j.submit_time, j.nodes, j.cores, cs, 1, 0, 0, 0});
    d.push_back({j.start_time, -j.nodes, -j.cores, -cs, -1, j.nodes, j.cores, 1});
    d.push_back({j.end_time, 0, 0, 0, 0, -j.nodes, -j.cores, -1});
  }
  std::stable_sort(d.begin(), d.end(), [](const Delta& a, const Delta& b) { return a.time < b.time; });
  return d;
}

std::vector<BacklogPoint> event_series(std::span<const JobRecord> jobs, std::int64_t actual_nodes) {
  auto deltas = deltas_of(jobs);
  std::vector<BacklogPoint> out;
  BacklogPoint s;
  for (std::size_t i = 0; i < deltas.size();) {
    UnixSeconds t = deltas[i].time;
    for (; i < deltas.size() && deltas[i].time == t; ++i) {
      const auto& d = deltas[i];
      s.queued_nodes += d.q_nodes;
      s.queued_cores += d.q_cores;
      s.queued_core_seconds += d.q_core_seconds;
      s.queued_jobs += d.q_jobs;
      s.running_nodes += d.r_nodes;
      s.running_cores += d.r_cores;
      s.running_jobs += d.r_jobs;
    }
    s.time = t;
    s.required_nodes = s.running_nodes + s.queued_nodes;
    s.queued_core_years = static_cast<double>(s.queued_core_seconds) / kCoreSecondsPerCoreYear;
    s.over_capacity = actual_nodes > 0 && s.running_nodes > actual_nodes;
    out.push_back(s);
  }
  return out;
}

UnixSeconds floor_day(UnixSeconds t) {
  auto r = t % kSecondsPerDay;
  return t - (r < 0 ? r + kSecondsPerDay : r);
}

}  // namespace

std::optional<Sampling> parse_sampling(std::string_view s) {
  if (s == "event") return Sampling::event;
  if (s == "daily") return Sampling::daily;
  return std::nullopt;
}

std::vector<BacklogPoint> backlog_series(std::span<const JobRecord> jobs, Sampling sampling,
                                         std::int64_t actual_nodes) {
  auto events = event_series(jobs, actual_nodes);
  if (sampling == Sampling::event || events.empty()) return events;
  std::vector<BacklogPoint> out;
  std::size_t i = 0;
  BacklogPoint state;
  for (UnixSeconds day = floor_day(events.front().time); day <= events.back().time;
       day += kSecondsPerDay) {
    while (i < events.size() && events[i].time <= day) state = events[i++];
    BacklogPoint p = state;
    p.time = day;
    out.push_back(p);
  }
  return out;
}

std::vector<JobRecord> jobs_on(std::span<const JobRecord> jobs, std::string_view resource) {
  std::vector<JobRecord> out;
  for (const auto& j : jobs)
    if (j.resource == resource) out.push_back(j);
  return out;
}

WaitStats wait_stats(std::string group, std::span<const JobRecord> jobs) {
  if (jobs.empty()) throw EmptyGroup(group);
  WaitStats w;
  w.group = std::move(group);
  w.jobs = jobs.size();
  std::vector<double> waits;
  long double num = 0, den = 0;
  for (const auto& j : jobs) {
    double h = static_cast<double>(j.wait_seconds()) / 3600.0;
    waits.push_back(h);
    num += static_cast<long double>(h) * j.core_hours();
    den += j.core_hours();
  }
  w.mean = stats::mean(waits);
  if (den > 0) w.core_hour_weighted_mean = static_cast<double>(num / den);
  w.q1 = stats::quantile_linear(waits, 0.25);
  w.median = stats::quantile_linear(waits, 0.5);
  w.q3 = stats::quantile_linear(std::move(waits), 0.75);
  return w;
}

std::vector<WaitStats> wait_stats_by_resource(std::span<const JobRecord> jobs) {
  std::map<std::string, std::vector<JobRecord>> groups;
  for (const auto& j : jobs) groups[j.resource].push_back(j);
  std::vector<WaitStats> out;
  for (const auto& [r, g] : groups) out.push_back(wait_stats(r, g));
  return out;
}

std::vector<Requirement> required_at_submit(std::span<const JobRecord> jobs) {
  auto events = event_series(jobs, 0);
  std::vector<Requirement> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs) {
    auto it = std::lower_bound(events.begin(), events.end(), j.submit_time,
                               [](const BacklogPoint& p, UnixSeconds t) { return p.time < t; });
    Requirement r{it->required_nodes, it->running_cores + it->queued_cores};
    if (j.end_time == j.submit_time) {
      r.nodes += j.nodes;
      r.cores += j.cores;
    }
    out.push_back(r);
  }
  return out;
}

namespace {

// Smallest level whose cumulative duration share reaches target.
std::int64_t time_quantile(std::vector<std::pair<std::int64_t, UnixSeconds>> levels, double target) {
  std::sort(levels.begin(), levels.end());
  long double total = 0;
  for (const auto& [l, d] : levels) total += d;
  long double acc = 0;
  for (const auto& [l, d] : levels) {
    acc += d;
    if (acc >= target * total) return l;
  }
  return levels.empty() ? 0 : levels.back().first;
}

}  // namespace

Capacity capacity_for_percentile(std::span<const JobRecord> jobs, const ResourceSpec& resource,
                                 double target, bool time_weighted) {
  if (!(target > 0.0 && target < 1.0)) throw DegenerateInput("target must be in (0, 1)");
  if (jobs.empty()) throw EmptyGroup(resource.name);
  Capacity c;
  c.target = target;
  c.time_weighted = time_weighted;
  auto events = event_series(jobs, 0);
  UnixSeconds span_seconds = events.back().time - events.front().time;
  if (time_weighted && span_seconds > 0) {
    std::vector<std::pair<std::int64_t, UnixSeconds>> nodes, cores;
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
      UnixSeconds d = events[i + 1].time - events[i].time;
      nodes.emplace_back(events[i].required_nodes, d);
      cores.emplace_back(events[i].running_cores + events[i].queued_cores, d);
    }
    c.nodes = time_quantile(std::move(nodes), target);
    c.cores = time_quantile(std::move(cores), target);
  } else {
    c.time_weighted = false;
    std::vector<double> n, k;
    for (const auto& r : required_at_submit(jobs)) {
      n.push_back(static_cast<double>(r.nodes));
      k.push_back(static_cast<double>(r.cores));
    }
    c.nodes = static_cast<std::int64_t>(stats::quantile_nearest_rank(std::move(n), target));
    c.cores = static_cast<std::int64_t>(stats::quantile_nearest_rank(std::move(k), target));
  }
  if (resource.nodes > 0) c.node_ratio = static_cast<double>(c.nodes) / static_cast<double>(resource.nodes);
  if (resource.total_cores() > 0)
    c.core_ratio = static_cast<double>(c.cores) / static_cast<double>(resource.total_cores());
  return c;
}

std::vector<UserDepth> user_queue_depth(std::span<const JobRecord> jobs,
                                        const std::vector<std::string>& community_users) {
  std::set<std::string, std::less<>> community(community_users.begin(), community_users.end());
  std::map<std::string, std::vector<std::pair<UnixSeconds, int>>> events;
  for (const auto& j : jobs) {
    auto& e = events[j.user];
    e.emplace_back(j.submit_time, +1);
    e.emplace_back(j.end_time, -1);
  }
  std::vector<UserDepth> out;
  for (auto& [user, e] : events) {
    // Ends sort before submits at the same instant: intervals are closed-open.
    std::sort(e.begin(), e.end());
    UserDepth d;
    d.user = user;
    d.community = community.contains(user);
    d.total_jobs = static_cast<std::int64_t>(e.size() / 2);
    std::int64_t cur = 0;
    for (const auto& [t, delta] : e) {
      cur += delta;
      d.max_concurrent = std::max(d.max_concurrent, cur);
    }
    out.push_back(d);
  }
  return out;
}

Table to_table(std::span<const BacklogPoint> series) {
  Table t({"time", "queued_core_years", "running_nodes", "queued_nodes", "required_nodes",
           "running_jobs", "queued_jobs", "over_capacity"});
  for (const auto& p : series)
    t.add_row({p.time, p.queued_core_years, p.running_nodes, p.queued_nodes, p.required_nodes,
               p.running_jobs, p.queued_jobs, std::string(p.over_capacity ? "true" : "false")});
  return t;
}

Table to_table(std::span<const WaitStats> rows) {
  Table t({"group", "jobs", "q1_hours", "median_hours", "q3_hours", "mean_hours",
           "core_hour_weighted_mean_hours"});
  for (const auto& w : rows)
    t.add_row({w.group, static_cast<std::int64_t>(w.jobs), w.q1, w.median, w.q3, w.mean,
               w.core_hour_weighted_mean ? Cell{*w.core_hour_weighted_mean} : Cell{}});
  return t;
}

Table to_table(std::span<const UserDepth> rows) {
  Table t({"user", "category", "max_concurrent_jobs", "total_jobs"});
  for (const auto& d : rows)
    t.add_row({d.user, std::string(d.community ? "community" : "individual"), d.max_concurrent,
               d.total_jobs});
  return t;
}

Table to_table(std::span<const CapacityRow> rows) {
  Table t({"resource", "nodes_actual", "nodes_95", "nodes_95_ratio", "nodes_99", "nodes_99_ratio",
           "cores_actual", "cores_95", "cores_95_ratio", "cores_99", "cores_99_ratio"});
  for (const auto& r : rows)
    t.add_row({r.resource, r.actual_nodes, r.p95.nodes, r.p95.node_ratio, r.p99.nodes,
               r.p99.node_ratio, r.actual_cores, r.p95.cores, r.p95.core_ratio, r.p99.cores,
               r.p99.core_ratio});
  return t;
}

}  // namespace hpcwl::backlog
