#include "hpcwl/metrics/concurrency.hpp"

#include <algorithm>
#include <map>

#include "hpcwl/core/errors.hpp"
#include "hpcwl/core/table.hpp"

namespace hpcwl::metrics {

Histogram1D runnable_threads_histogram(std::span<const JobView> views,
                                       const ResourceMap& resources) {
  std::int64_t max_cpn = 1;
  for (const auto& v : views) {
    auto it = resources.find(v.job->resource);
    if (it == resources.end()) throw UnknownResource(v.job->resource);
    max_cpn = std::max(max_cpn, it->second.cores_per_node);
  }
  std::vector<double> edges;
  for (std::int64_t k = 0; k <= max_cpn + 1; ++k) edges.push_back(static_cast<double>(k));
  auto h = Histogram1D::make(edges, WeightKind::node_hours);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) h.labels[i] = std::to_string(i);
  h.overflow_label = ">" + std::to_string(max_cpn);
  for (const auto& v : views) {
    double w = v.job->node_hours();
    if (v.summary && v.summary->runnable_threads_median)
      h.add(*v.summary->runnable_threads_median, w);
    else
      h.add_absent(w);
  }
  return h;
}

std::vector<LaunchTypeRow> launch_type_series(std::span<const JobView> views,
                                              const ResourceMap& resources, Period period) {
  std::map<std::pair<std::string, std::string>, LaunchTypeRow> acc;
  for (const auto& v : views) {
    auto p = period_label(v.job->end_time, period);
    std::string lt(to_string(v.summary ? v.summary->launch_type : perf::LaunchType::unknown));
    auto& row = acc[{p, lt}];
    row.period = p;
    row.launch_type = lt;
    row.xd_su += job_weight(*v.job, WeightKind::xd_su, resources);
    ++row.jobs;
  }
  std::vector<LaunchTypeRow> out;
  for (auto& [k, r] : acc) out.push_back(std::move(r));
  return out;
}

std::vector<ProcessBandRow> process_bands(std::span<const JobView> views,
                                          const ResourceMap& resources, double low, double high) {
  std::vector<ProcessBandRow> out{{"<=" + format_number(low), 0, 0},
                                  {">" + format_number(low) + "<=" + format_number(high), 0, 0},
                                  {">" + format_number(high), 0, 0},
                                  {"N/A", 0, 0}};
  for (const auto& v : views) {
    double su = job_weight(*v.job, WeightKind::xd_su, resources);
    std::size_t band = 3;
    if (v.summary && v.summary->processes_per_node) {
      double p = *v.summary->processes_per_node;
      band = p <= low ? 0 : (p <= high ? 1 : 2);
    }
    out[band].xd_su += su;
    ++out[band].jobs;
  }
  return out;
}

Table to_table(std::span<const LaunchTypeRow> rows) {
  Table t({"period", "launch_type", "xd_su", "jobs"});
  for (const auto& r : rows)
    t.add_row({r.period, r.launch_type, r.xd_su, static_cast<std::int64_t>(r.jobs)});
  return t;
}

Table to_table(std::span<const ProcessBandRow> rows) {
  Table t({"band", "xd_su", "jobs"});
  for (const auto& r : rows) t.add_row({r.band, r.xd_su, static_cast<std::int64_t>(r.jobs)});
  return t;
}

}  // namespace hpcwl::metrics
