#include "hpcwl/ingest/dataset.hpp"

#include "hpcwl/core/errors.hpp"
#include "hpcwl/ingest/validate.hpp"

namespace hpcwl {

Dataset Dataset::assemble(Loaded<JobRecord> jobs, Loaded<AllocationRecord> allocations,
                          ResourceMap resources) {
  Dataset ds;
  ds.resources_ = std::move(resources);
  ds.job_rejections_ = std::move(jobs.rejections);
  ds.allocation_rejections_ = std::move(allocations.rejections);

  ds.jobs_.reserve(jobs.records.size());
  for (auto& j : jobs.records) {
    if (!ds.resources_.contains(j.resource)) {
      UnknownResource err(j.resource);
      ds.job_rejections_.push_back({0, "resource", err.code(), "job " + j.job_id + ": " + err.what()});
      continue;
    }
    ds.jobs_.push_back(std::move(j));
  }
  ds.allocations_ = std::move(allocations.records);
  ds.flags_ = std::move(allocations.flags);
  for (auto& f : jobs.flags) ds.flags_.push_back(std::move(f));

  ds.aggregated_.reserve(ds.jobs_.size());
  for (const auto& j : ds.jobs_)
    ds.aggregated_.push_back(is_aggregated_accounting(j, ds.resources_.at(j.resource)));
  return ds;
}

const ResourceSpec& Dataset::resource(std::string_view name) const {
  auto it = resources_.find(name);
  if (it == resources_.end()) throw UnknownResource(std::string(name));
  return it->second;
}

bool Dataset::resolves(const RecordLocator& loc) const {
  switch (loc.kind) {
    case RecordKind::job:
      return loc.index < jobs_.size();
    case RecordKind::allocation:
      return loc.index < allocations_.size();
    case RecordKind::resource:
      return resources_.contains(loc.key);
  }
  return false;
}

bool Dataset::is_aggregated(std::size_t job_index) const {
  return job_index < aggregated_.size() && aggregated_[job_index];
}

Dataset Dataset::with_flags(std::vector<QualityFlag> extra) const {
  Dataset copy = *this;
  for (auto& f : extra) copy.flags_.push_back(std::move(f));
  return copy;
}

std::vector<JobRecord> per_job_population(const Dataset& ds) {
  std::vector<JobRecord> out;
  auto jobs = ds.jobs();
  out.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (!ds.is_aggregated(i)) out.push_back(jobs[i]);
  return out;
}

}  // namespace hpcwl
