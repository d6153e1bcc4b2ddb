#include "hpcwl/metrics/apps.hpp"

#include <algorithm>
#include <map>

#include "hpcwl/appident/appident.hpp"
#include "hpcwl/ingest/su.hpp"

namespace hpcwl::metrics {

namespace {

struct WeightedMean {
  double sum = 0.0;
  double weight = 0.0;

  void add(const std::optional<double>& v, double w) {
    if (!v) return;
    sum += *v * w;
    weight += w;
  }
  std::optional<double> value() const {
    if (weight <= 0) return std::nullopt;
    return sum / weight;
  }
};

struct Acc {
  AppUsageRow row;
  WeightedMean cpu, mem, lustre, ib, non_lustre;
};

std::optional<double> per_node_hour(const std::optional<double>& bytes, const JobRecord& job) {
  if (!bytes || job.node_hours() <= 0) return std::nullopt;
  return *bytes / job.node_hours();
}

}  // namespace

std::vector<AppUsageRow> app_usage(std::span<const JobView> views, const ResourceMap& resources) {
  std::map<std::string, Acc> acc;
  for (const auto& v : views) {
    const auto& job = *v.job;
    std::string label = v.summary ? v.summary->app.reported() : std::string(appident::kNotAvailable);
    auto& a = acc[label];
    a.row.app = label;
    ++a.row.jobs;
    a.row.xd_su += job_xd_su(job, resources);
    double ch = job.core_hours();
    a.row.core_hours += ch;
    a.row.node_hours += job.node_hours();
    if (!v.summary) continue;
    const auto& s = *v.summary;
    a.cpu.add(s.cpu_user_fraction, ch);
    a.mem.add(s.mem_avg_per_core, ch);
    a.lustre.add(per_node_hour(s.lustre_total(), job), ch);
    a.ib.add(per_node_hour(s.ib_total(), job), ch);
    a.non_lustre.add(per_node_hour(s.non_lustre_ib, job), ch);
  }
  std::vector<AppUsageRow> out;
  for (auto& [label, a] : acc) {
    a.row.cpu_user_fraction = a.cpu.value();
    a.row.mem_avg_per_core = a.mem.value();
    a.row.lustre_per_node_hour = a.lustre.value();
    a.row.ib_per_node_hour = a.ib.value();
    a.row.non_lustre_ib_per_node_hour = a.non_lustre.value();
    out.push_back(std::move(a.row));
  }
  std::stable_sort(out.begin(), out.end(), [](const AppUsageRow& x, const AppUsageRow& y) {
    if (x.xd_su != y.xd_su) return x.xd_su > y.xd_su;
    return x.app < y.app;
  });
  return out;
}

Table to_table(std::span<const AppUsageRow> rows) {
  Table t({"app", "jobs", "xd_su", "core_hours", "node_hours", "cpu_user_fraction",
           "mem_avg_per_core", "lustre_per_node_hour", "ib_per_node_hour",
           "non_lustre_ib_per_node_hour"});
  auto opt = [](const std::optional<double>& v) -> Cell {
    if (v) return *v;
    return std::monostate{};
  };
  for (const auto& r : rows)
    t.add_row({r.app, static_cast<std::int64_t>(r.jobs), r.xd_su, r.core_hours, r.node_hours,
               opt(r.cpu_user_fraction), opt(r.mem_avg_per_core), opt(r.lustre_per_node_hour),
               opt(r.ib_per_node_hour), opt(r.non_lustre_ib_per_node_hour)});
  return t;
}

}  // namespace hpcwl::metrics
