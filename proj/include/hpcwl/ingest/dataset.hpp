#pragma once

#include <memory>
#include <span>
#include <string_view>

#include "hpcwl/ingest/types.hpp"

namespace hpcwl {

// Immutable once assembled; share through std::shared_ptr<const Dataset> for concurrent reads.
class Dataset {
 public:
  // Jobs whose resource is not in `resources` are dropped and reported as rejections
  // (code UnknownResource). Load-time flags and rejections are carried over.
  static Dataset assemble(Loaded<JobRecord> jobs, Loaded<AllocationRecord> allocations,
                          ResourceMap resources);

  std::span<const JobRecord> jobs() const { return jobs_; }
  std::span<const AllocationRecord> allocations() const { return allocations_; }
  const ResourceMap& resources() const { return resources_; }
  std::span<const QualityFlag> quality_flags() const { return flags_; }
  std::span<const Rejection> job_rejections() const { return job_rejections_; }
  std::span<const Rejection> allocation_rejections() const { return allocation_rejections_; }

  const ResourceSpec& resource(std::string_view name) const;
  const ResourceSpec& resource_of(const JobRecord& job) const { return resource(job.resource); }

  // True when the locator points at an existing record.
  bool resolves(const RecordLocator& loc) const;

  // Jobs flagged as aggregated accounting rows; these stay in XD SU totals but are
  // excluded from per-job metrics.
  bool is_aggregated(std::size_t job_index) const;

  // Copy of this dataset with validate() flags appended.
  Dataset with_flags(std::vector<QualityFlag> extra) const;

 private:
  Dataset() = default;

  std::vector<JobRecord> jobs_;
  std::vector<AllocationRecord> allocations_;
  ResourceMap resources_;
  std::vector<QualityFlag> flags_;
  std::vector<Rejection> job_rejections_;
  std::vector<Rejection> allocation_rejections_;
  std::vector<bool> aggregated_;
};

// Jobs kept for per-job metrics (aggregated-accounting rows removed).
std::vector<JobRecord> per_job_population(const Dataset& ds);

}  // namespace hpcwl
