#include "hpcwl/metrics/memory.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "hpcwl/core/errors.hpp"
#include "hpcwl/metrics/jobsize.hpp"

namespace hpcwl::metrics {

namespace {

constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const ResourceSpec& spec_of(const JobRecord& j, const ResourceMap& resources) {
  auto it = resources.find(j.resource);
  if (it == resources.end()) throw UnknownResource(j.resource);
  return it->second;
}

}  // namespace

std::optional<MemoryMode> parse_memory_mode(std::string_view s) {
  if (s == "per_core_avg") return MemoryMode::per_core_avg;
  if (s == "per_core_max") return MemoryMode::per_core_max;
  return std::nullopt;
}

std::optional<MemXAxis> parse_mem_x_axis(std::string_view s) {
  if (s == "fraction_cores_of_system") return MemXAxis::fraction_cores_of_system;
  if (s == "cpu_user_fraction") return MemXAxis::cpu_user_fraction;
  if (s == "nodes") return MemXAxis::nodes;
  return std::nullopt;
}

std::optional<MemYAxis> parse_mem_y_axis(std::string_view s) {
  if (s == "fraction_mem_used") return MemYAxis::fraction_mem_used;
  if (s == "total_peak_mem") return MemYAxis::total_peak_mem;
  return std::nullopt;
}

std::optional<LargeMemGroup> parse_large_mem_group(std::string_view s) {
  if (s == "parent_science") return LargeMemGroup::parent_science;
  if (s == "application" || s == "app") return LargeMemGroup::application;
  return std::nullopt;
}

std::vector<double> default_memory_edges() { return linear_edges(0.0, 8.0 * kGiB, 32); }

std::optional<double> node_memory(const JobView& v, const ResourceMap& resources) {
  if (v.summary && v.summary->node_mem_total && *v.summary->node_mem_total > 0)
    return v.summary->node_mem_total;
  const auto& r = spec_of(*v.job, resources);
  if (r.mem_per_node && *r.mem_per_node > 0) return static_cast<double>(*r.mem_per_node);
  return std::nullopt;
}

std::optional<double> peak_memory_fraction(const JobView& v, const ResourceMap& resources) {
  if (!v.summary || !v.summary->mem_max_per_core) return std::nullopt;
  auto mem = node_memory(v, resources);
  if (!mem) return std::nullopt;
  const auto& r = spec_of(*v.job, resources);
  return *v.summary->mem_max_per_core * static_cast<double>(r.cores_per_node) / *mem;
}

Histogram1D memory_histogram(std::span<const JobView> views, const ResourceMap& resources,
                             MemoryMode mode, WeightKind weight, std::vector<double> edges) {
  if (edges.empty()) edges = default_memory_edges();
  auto h = Histogram1D::make(std::move(edges), weight);
  for (const auto& v : views) {
    double w = job_weight(*v.job, weight, resources);
    std::optional<double> m;
    if (v.summary)
      m = mode == MemoryMode::per_core_avg ? v.summary->mem_avg_per_core : v.summary->mem_max_per_core;
    if (m)
      h.add(*m, w);
    else
      h.add_absent(w);
  }
  return h;
}

Histogram2D memory_2d(std::span<const JobView> views, const ResourceMap& resources, MemXAxis x,
                      MemYAxis y, WeightKind weight, std::vector<double> x_edges,
                      std::vector<double> y_edges) {
  if (x_edges.empty())
    x_edges = x == MemXAxis::nodes ? default_job_size_edges() : linear_edges(0.0, 1.0, 20);
  if (y_edges.empty())
    y_edges = y == MemYAxis::fraction_mem_used ? linear_edges(0.0, 1.0, 20) : log_edges(6, 15, 4);
  auto h = Histogram2D::make(std::move(x_edges), std::move(y_edges), weight);
  h.close_last = true;
  for (const auto& v : views) {
    const auto& job = *v.job;
    const auto& r = spec_of(job, resources);
    double w = job_weight(job, weight, resources);
    double xv = kNaN;
    switch (x) {
      case MemXAxis::fraction_cores_of_system:
        if (r.total_cores() > 0)
          xv = static_cast<double>(job.cores) / static_cast<double>(r.total_cores());
        break;
      case MemXAxis::cpu_user_fraction:
        if (v.summary && v.summary->cpu_user_fraction) xv = *v.summary->cpu_user_fraction;
        break;
      case MemXAxis::nodes: xv = static_cast<double>(job.nodes); break;
    }
    double yv = kNaN;
    if (v.summary) {
      if (y == MemYAxis::fraction_mem_used) {
        auto mem = node_memory(v, resources);
        if (v.summary->mem_avg_per_core && mem)
          yv = *v.summary->mem_avg_per_core * static_cast<double>(r.cores_per_node) / *mem;
      } else if (v.summary->mem_max_per_core) {
        yv = *v.summary->mem_max_per_core * static_cast<double>(job.cores);
      }
    }
    h.add(xv, yv, w);
  }
  return h;
}

LargeMemoryResult large_memory_breakdown(std::span<const JobView> views,
                                         const ResourceMap& resources, LargeMemGroup group,
                                         double normal_threshold, double large_threshold) {
  LargeMemoryResult out;
  std::map<std::string, LargeMemoryRow> rows;
  for (const auto& v : views) {
    const auto& job = *v.job;
    double su = job_weight(job, WeightKind::xd_su, resources);
    auto frac = peak_memory_fraction(v, resources);
    if (!frac) {
      out.absent_xd_su += su;
      continue;
    }
    bool large_queue = spec_of(job, resources).is_large_memory_queue(job.queue);
    if (large_queue ? !(*frac > large_threshold) : !(*frac > normal_threshold)) continue;
    std::string key = group == LargeMemGroup::parent_science ? job.project.parent_science
                                                             : v.summary->app.reported();
    auto& row = rows[key];
    row.group = key;
    (large_queue ? row.large_queue_xd_su : row.normal_queue_xd_su) += su;
  }
  for (auto& [k, r] : rows) out.rows.push_back(std::move(r));
  return out;
}

Table to_table(const LargeMemoryResult& r) {
  Table t({"group", "normal_queue_xd_su", "large_queue_xd_su"});
  for (const auto& row : r.rows) t.add_row({row.group, row.normal_queue_xd_su, row.large_queue_xd_su});
  t.add_row({std::string("absent"), r.absent_xd_su, 0.0});
  return t;
}

}  // namespace hpcwl::metrics
