#include "hpcwl/metrics/rollup.hpp"

#include <map>

#include "hpcwl/core/errors.hpp"

namespace hpcwl::metrics {

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::resource: return "resource";
    case Dimension::directorate: return "directorate";
    case Dimension::parent_science: return "parent_science";
    case Dimension::field_of_science: return "field_of_science";
    case Dimension::rtype: return "rtype";
    case Dimension::nsf_user_status: return "nsf_user_status";
    case Dimension::state: return "state";
  }
  return "resource";
}

std::optional<Dimension> parse_dimension(std::string_view s) {
  for (auto d : {Dimension::resource, Dimension::directorate, Dimension::parent_science,
                 Dimension::field_of_science, Dimension::rtype, Dimension::nsf_user_status,
                 Dimension::state})
    if (to_string(d) == s) return d;
  return std::nullopt;
}

std::string dimension_value(const JobRecord& job, Dimension d, const ResourceMap& resources) {
  switch (d) {
    case Dimension::resource: return job.resource;
    case Dimension::directorate: return job.project.directorate;
    case Dimension::parent_science: return job.project.parent_science;
    case Dimension::field_of_science: return job.project.field_of_science;
    case Dimension::rtype: {
      auto it = resources.find(job.resource);
      if (it == resources.end()) throw UnknownResource(job.resource);
      return std::string(to_string(it->second.rtype));
    }
    case Dimension::nsf_user_status: return std::string(to_string(job.nsf_user_status));
    case Dimension::state: return job.state_of_origin.value_or("unknown");
  }
  return {};
}

RollupResult usage_rollup(std::span<const JobRecord> jobs, const ResourceMap& resources,
                          Dimension dimension, WeightKind weight, Period period,
                          const JobFilter& filter) {
  RollupResult out;
  std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> cells;
  std::map<std::string, double> period_totals;
  for (const auto& job : jobs) {
    if (!filter.matches(job, resources)) continue;
    double w;
    try {
      w = job_weight(job, weight, resources);
    } catch (const NoFactorForDate&) {
      out.unconverted_jobs.push_back(job.job_id);
      continue;
    }
    auto p = period_label(job.end_time, period);
    auto& cell = cells[{p, dimension_value(job, dimension, resources)}];
    cell.first += w;
    cell.second += 1;
    period_totals[p] += w;
  }
  for (const auto& [key, cell] : cells) {
    double pt = period_totals[key.first];
    out.rows.push_back({key.first, key.second, cell.first, pt > 0 ? 100.0 * cell.first / pt : 0.0,
                        cell.second});
  }
  return out;
}

Table to_table(const RollupResult& r) {
  Table t({"period", "value", "total", "share_pct", "jobs"});
  for (const auto& row : r.rows)
    t.add_row({row.period, row.value, row.total, row.share_pct, static_cast<std::int64_t>(row.jobs)});
  return t;
}

}  // namespace hpcwl::metrics
