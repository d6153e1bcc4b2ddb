#include "hpcwl/ingest/validate.hpp"

namespace hpcwl {

bool is_aggregated_accounting(const JobRecord& job, const ResourceSpec& resource) {
  return resource.rtype == ResourceType::Cloud && job.wall_seconds() > kAggregatedAccountingSeconds;
}

std::vector<QualityFlag> validate(const Dataset& ds) {
  std::vector<QualityFlag> flags;
  auto jobs = ds.jobs();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const JobRecord& j = jobs[i];
    const ResourceSpec& r = ds.resource_of(j);
    RecordLocator loc{RecordKind::job, i, j.job_id};

    Date started = Date::from_unix(j.start_time);
    if (started < r.production_start || (r.production_end && *r.production_end < started))
      flags.push_back({loc, std::string(issue::production_window),
                       "started " + started.to_string() + " outside production window of " +
                           r.name});
    if (j.nodes > r.nodes || j.cores > j.nodes * r.cores_per_node)
      flags.push_back({loc, std::string(issue::geometry),
                       std::to_string(j.cores) + " cores on " + std::to_string(j.nodes) +
                           " nodes exceeds " + r.name + " geometry"});
    if (is_aggregated_accounting(j, r))
      flags.push_back({loc, std::string(issue::aggregated_accounting),
                       "duration over 30 days on a Cloud resource"});
  }
  return flags;
}

}  // namespace hpcwl
