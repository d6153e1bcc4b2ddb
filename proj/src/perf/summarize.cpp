#include "hpcwl/perf/summarize.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hpcwl/core/errors.hpp"
#include "hpcwl/core/stats.hpp"

namespace hpcwl::perf {

double memory_per_core(const MemInfoSample& sample, std::int64_t n_cores) {
  if (n_cores < 1) throw InvalidMemInfo("n_cores must be >= 1");
  std::int64_t used = 0;
  for (const auto& n : sample.numa) {
    if (n.mem_total < 0 || n.mem_free < 0 || n.file_pages < 0 || n.slab < 0)
      throw InvalidMemInfo("negative meminfo component on node " + sample.node);
    std::int64_t u = n.mem_total - n.mem_free - n.file_pages - n.slab;
    if (u < 0)
      throw InvalidMemInfo("MemFree + FilePages + Slab exceeds MemTotal on node " + sample.node);
    used += u;
  }
  return static_cast<double>(used) / static_cast<double>(n_cores);
}

NonLustreIb non_lustre_ib(double ib_total, double lustre_total) {
  if (lustre_total > ib_total) return {0.0, true};
  return {ib_total - lustre_total, false};
}

LaunchType classify_launch_type(std::int64_t n_processes, std::int64_t threads_per_process,
                                bool instrumented) {
  if (!instrumented || n_processes < 1 || threads_per_process < 1) return LaunchType::unknown;
  bool multi_p = n_processes > 1;
  bool multi_t = threads_per_process > 1;
  if (multi_p && multi_t) return LaunchType::multi_process_multi_threaded;
  if (multi_p) return LaunchType::multi_process;
  if (multi_t) return LaunchType::multi_threaded;
  return LaunchType::serial;
}

CounterDelta counter_delta(std::span<const double> readings) {
  CounterDelta out;
  for (std::size_t i = 1; i < readings.size(); ++i) {
    double step = readings[i] - readings[i - 1];
    if (step < 0) {
      out.regressed = true;
      step = readings[i];
    }
    out.delta += step;
  }
  return out;
}

namespace {

// Sums the counter delta for one metric across the job's nodes, recording issues.
std::optional<double> job_counter(const JobRecord& job,
                                  const std::map<std::pair<std::string, std::string>,
                                                 std::vector<const PerfSample*>>& series,
                                  const std::vector<std::string>& nodes, std::string_view metric,
                                  std::vector<SummaryIssue>& issues) {
  bool seen = false;
  bool complete = true;
  double total = 0.0;
  for (const auto& node : nodes) {
    auto it = series.find({node, std::string(metric)});
    if (it == series.end()) {
      complete = false;
      continue;
    }
    seen = true;
    const auto& s = it->second;
    // Reading at or before start, and the first reading at or after end.
    auto after_start = std::upper_bound(s.begin(), s.end(), job.start_time,
                                        [](UnixSeconds t, const PerfSample* p) { return t < p->time; });
    auto at_end = std::lower_bound(s.begin(), s.end(), job.end_time,
                                   [](const PerfSample* p, UnixSeconds t) { return p->time < t; });
    if (after_start == s.begin()) {
      issues.push_back({"MissingProlog", node, std::string(metric)});
      complete = false;
      continue;
    }
    if (at_end == s.end()) {
      issues.push_back({"MissingEpilog", node, std::string(metric)});
      complete = false;
      continue;
    }
    std::vector<double> readings;
    for (auto p = std::prev(after_start); p <= at_end; ++p) readings.push_back((*p)->value);
    auto d = counter_delta(readings);
    if (d.regressed) issues.push_back({"CounterRegression", node, std::string(metric)});
    total += d.delta;
  }
  if (!seen) return std::nullopt;
  if (!complete) {
    if (std::none_of(issues.begin(), issues.end(),
                     [&](const SummaryIssue& i) { return i.metric == metric; }))
      issues.push_back({"MissingProlog", "", std::string(metric)});
    return std::nullopt;
  }
  return total;
}

}  // namespace

std::optional<double> JobPerfSummary::lustre_total() const {
  if (!lustre_rx || !lustre_tx) return std::nullopt;
  return *lustre_rx + *lustre_tx;
}

std::optional<double> JobPerfSummary::ib_total() const {
  if (!ib_rx || !ib_tx) return std::nullopt;
  return *ib_rx + *ib_tx;
}

std::optional<JobPerfSummary> summarize_job(const JobRecord& job, const JobArchive& archive,
                                            std::int64_t cores_per_node,
                                            const SummarizeOptions& options) {
  if (archive.nodes.empty()) return std::nullopt;

  JobPerfSummary out;
  out.job_id = job.job_id;
  std::set<std::string, std::less<>> nodes(archive.nodes.begin(), archive.nodes.end());

  std::map<std::pair<std::string, std::string>, std::vector<const PerfSample*>> counters;
  std::vector<double> runnable;
  for (const auto& s : archive.samples) {
    if (!nodes.contains(s.node)) continue;
    if (s.kind == MetricKind::counter) {
      counters[{s.node, s.metric}].push_back(&s);
    } else if (s.time > job.start_time && s.time < job.end_time) {
      ++out.samples_used;
      if (s.metric == metric::procs_running) runnable.push_back(s.value);
    }
  }
  for (auto& [key, v] : counters)
    std::stable_sort(v.begin(), v.end(),
                     [](const PerfSample* a, const PerfSample* b) { return a->time < b->time; });

  auto counter = [&](std::string_view m) {
    return job_counter(job, counters, archive.nodes, m, out.issues);
  };
  auto user = counter(metric::cpu_user);
  auto total = counter(metric::cpu_total);
  if (user && total && *total > 0) out.cpu_user_fraction = std::clamp(*user / *total, 0.0, 1.0);

  out.lustre_rx = counter(metric::lustre_rx);
  out.lustre_tx = counter(metric::lustre_tx);
  out.ib_rx = counter(metric::ib_rx);
  out.ib_tx = counter(metric::ib_tx);
  out.file_opens = counter(metric::file_opens);
  if (auto ib = out.ib_total(), lustre = out.lustre_total(); ib && lustre) {
    auto n = non_lustre_ib(*ib, *lustre);
    out.non_lustre_ib = n.bytes;
    if (n.clamped) out.issues.push_back({"NonLustreClamp", "", ""});
  }

  if (!runnable.empty()) out.runnable_threads_median = stats::median(runnable);

  std::vector<double> mem;
  std::vector<double> totals;
  for (const auto& m : archive.meminfo) {
    if (!nodes.contains(m.node) || m.time <= job.start_time || m.time >= job.end_time) continue;
    mem.push_back(memory_per_core(m, cores_per_node));
    double t = 0;
    for (const auto& n : m.numa) t += static_cast<double>(n.mem_total);
    totals.push_back(t);
    ++out.samples_used;
  }
  if (!mem.empty()) {
    out.mem_avg_per_core = stats::mean(mem);
    out.mem_max_per_core = *std::max_element(mem.begin(), mem.end());
    out.node_mem_total = stats::mean(totals);
  }

  if (archive.launcher) {
    const auto& l = *archive.launcher;
    out.launch_type = classify_launch_type(l.n_processes, l.threads_per_process, true);
    if (l.n_processes > 0 && l.threads_per_process > 0)
      out.processes_per_node = static_cast<double>(l.n_processes * l.threads_per_process) /
                               static_cast<double>(job.nodes);
  }

  if (options.app_db) {
    static const appident::IgnoreList kEmpty;
    std::optional<std::string> exe;
    if (archive.launcher) exe = archive.launcher->exe;
    out.app = appident::resolve_job_app(exe, archive.processes, *options.app_db,
                                        options.ignore ? *options.ignore : kEmpty);
  } else {
    out.app = {std::string(appident::kNotAvailable), false};
  }
  return out;
}

nlohmann::json to_json(const JobPerfSummary& s) {
  nlohmann::json j = nlohmann::json::object();
  j["job_id"] = s.job_id;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("cpu_user_fraction", s.cpu_user_fraction);
  put("mem_avg_per_core", s.mem_avg_per_core);
  put("mem_max_per_core", s.mem_max_per_core);
  put("node_mem_total", s.node_mem_total);
  put("lustre_rx", s.lustre_rx);
  put("lustre_tx", s.lustre_tx);
  put("ib_rx", s.ib_rx);
  put("ib_tx", s.ib_tx);
  put("non_lustre_ib", s.non_lustre_ib);
  put("runnable_threads_median", s.runnable_threads_median);
  put("file_opens", s.file_opens);
  put("processes_per_node", s.processes_per_node);
  j["app_label"] = s.app.reported();
  j["launch_type"] = std::string(to_string(s.launch_type));
  j["samples_used"] = s.samples_used;
  auto issues = nlohmann::json::array();
  for (const auto& i : s.issues)
    issues.push_back({{"code", i.code}, {"metric", i.metric}, {"node", i.node}});
  j["issues"] = std::move(issues);
  return j;
}

}  // namespace hpcwl::perf
