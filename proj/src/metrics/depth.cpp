#include "hpcwl/metrics/depth.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hpcwl/core/errors.hpp"

namespace hpcwl::metrics {

std::string_view to_string(DepthBy b) { return b == DepthBy::cores ? "cores" : "nodes"; }

std::optional<DepthBy> parse_depth_by(std::string_view s) {
  if (s == "cores") return DepthBy::cores;
  if (s == "nodes") return DepthBy::nodes;
  return std::nullopt;
}

DepthProfile depth_profile(std::span<const JobRecord> jobs, DepthBy by, std::optional<int> year) {
  std::map<std::string, ProjectDepth> acc;
  for (const auto& j : jobs) {
    if (year && Date::from_unix(j.end_time).year() != *year) continue;
    auto& p = acc[j.charge_number];
    p.project_id = j.charge_number;
    p.depth = std::max(p.depth, by == DepthBy::cores ? j.cores : j.nodes);
    p.usage += j.core_hours();
    ++p.job_count;
  }
  DepthProfile out;
  out.by = by;
  for (auto& [id, p] : acc) out.projects.push_back(std::move(p));
  return out;
}

std::string JointRatioResult::label() const {
  return std::to_string(deep_usage_pct) + ":" + std::to_string(deep_projects_pct);
}

JointRatioResult joint_ratio(const DepthProfile& profile) {
  long double total_usage = 0;
  for (const auto& p : profile.projects) total_usage += p.usage;
  if (profile.projects.empty() || !(total_usage > 0)) throw EmptyProfile();

  std::vector<const ProjectDepth*> order;
  for (const auto& p : profile.projects) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->depth < b->depth; });

  const auto n = static_cast<long double>(order.size());
  long double usage_le = 0;
  std::size_t count_le = 0;
  std::int64_t crossing = order.back()->depth;
  for (std::size_t i = 0; i < order.size();) {
    std::int64_t d = order[i]->depth;
    for (; i < order.size() && order[i]->depth == d; ++i) {
      usage_le += order[i]->usage;
      ++count_le;
    }
    // count_le/N + usage_le/U >= 1, cross-multiplied.
    if (static_cast<long double>(count_le) * total_usage + usage_le * n >= n * total_usage) {
      crossing = d;
      break;
    }
  }

  JointRatioResult r;
  r.depth_at_ratio = crossing;
  long double usage_gt = 0;
  for (const auto* p : order) {
    if (p->depth <= crossing) continue;
    ++r.projects_at_ratio;
    usage_gt += p->usage;
    r.jobs_at_ratio += p->job_count;
  }
  r.usage_at_ratio = static_cast<double>(usage_gt);
  r.deep_usage_pct = static_cast<int>(std::llround(100.0L * usage_gt / total_usage));
  r.deep_projects_pct = 100 - r.deep_usage_pct;
  return r;
}

std::vector<WidthPoint> width_curves(const DepthProfile& profile) {
  std::map<std::int64_t, WidthPoint> by_depth;
  double n = 0, jobs = 0, usage = 0;
  for (const auto& p : profile.projects) {
    auto& w = by_depth[p.depth];
    w.depth = p.depth;
    w.projects += 1;
    w.jobs += static_cast<double>(p.job_count);
    w.usage += p.usage;
    n += 1;
    jobs += static_cast<double>(p.job_count);
    usage += p.usage;
  }
  std::vector<WidthPoint> out;
  WidthPoint cum;
  for (const auto& [d, w] : by_depth) {
    cum.depth = d;
    cum.projects += w.projects;
    cum.jobs += w.jobs;
    cum.usage += w.usage;
    out.push_back(cum);
  }
  for (auto& w : out) {
    w.projects = n > 0 ? w.projects / n : 0;
    w.jobs = jobs > 0 ? w.jobs / jobs : 0;
    w.usage = usage > 0 ? w.usage / usage : 0;
  }
  if (!out.empty()) {
    out.back().projects = n > 0 ? 1.0 : 0.0;
    out.back().jobs = jobs > 0 ? 1.0 : 0.0;
    out.back().usage = usage > 0 ? 1.0 : 0.0;
  }
  return out;
}

Table to_table(std::span<const WidthPoint> curve) {
  Table t({"depth", "projects", "jobs", "usage"});
  for (const auto& w : curve) t.add_row({w.depth, w.projects, w.jobs, w.usage});
  return t;
}

}  // namespace hpcwl::metrics
