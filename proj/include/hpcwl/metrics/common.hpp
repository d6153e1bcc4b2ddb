#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpcwl/ingest/types.hpp"
#include "hpcwl/metrics/histogram.hpp"
#include "hpcwl/perf/types.hpp"

namespace hpcwl::metrics {

// OSG here means the resource named "OSG" of type HTC.
bool is_osg(const JobRecord& job, const ResourceMap& resources);

struct JobFilter {
  bool exclude_osg = false;
  std::vector<std::string> resources;  // empty: all
  std::vector<std::string> queues;     // empty: all
  std::optional<UnixSeconds> from;     // end_time >= from
  std::optional<UnixSeconds> to;       // end_time < to

  bool matches(const JobRecord& job, const ResourceMap& resources) const;
};

std::vector<JobRecord> filter_jobs(std::span<const JobRecord> jobs, const ResourceMap& resources,
                                   const JobFilter& filter);

// XD SU weights may throw NoFactorForDate.
double job_weight(const JobRecord& job, WeightKind kind, const ResourceMap& resources);

// A job joined to its performance summary; summary is null when none exists.
struct JobView {
  const JobRecord* job = nullptr;
  const perf::JobPerfSummary* summary = nullptr;
};

}  // namespace hpcwl::metrics
