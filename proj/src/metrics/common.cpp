#include "hpcwl/metrics/common.hpp"

#include <algorithm>

#include "hpcwl/ingest/su.hpp"

namespace hpcwl::metrics {

bool is_osg(const JobRecord& job, const ResourceMap& resources) {
  if (job.resource != "OSG") return false;
  auto it = resources.find(job.resource);
  return it != resources.end() && it->second.rtype == ResourceType::HTC;
}

bool JobFilter::matches(const JobRecord& job, const ResourceMap& res) const {
  if (exclude_osg && is_osg(job, res)) return false;
  if (!resources.empty() &&
      std::find(resources.begin(), resources.end(), job.resource) == resources.end())
    return false;
  if (!queues.empty() && std::find(queues.begin(), queues.end(), job.queue) == queues.end())
    return false;
  if (from && job.end_time < *from) return false;
  if (to && job.end_time >= *to) return false;
  return true;
}

std::vector<JobRecord> filter_jobs(std::span<const JobRecord> jobs, const ResourceMap& resources,
                                   const JobFilter& filter) {
  std::vector<JobRecord> out;
  for (const auto& j : jobs)
    if (filter.matches(j, resources)) out.push_back(j);
  return out;
}

double job_weight(const JobRecord& job, WeightKind kind, const ResourceMap& resources) {
  switch (kind) {
    case WeightKind::count: return 1.0;
    case WeightKind::core_hours: return job.core_hours();
    case WeightKind::node_hours: return job.node_hours();
    case WeightKind::xd_su: return job_xd_su(job, resources);
  }
  return 1.0;
}

}  // namespace hpcwl::metrics
