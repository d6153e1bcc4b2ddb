#pragma once

#include <span>

#include <nlohmann/json.hpp>

#include "hpcwl/ingest/types.hpp"
#include "hpcwl/perf/types.hpp"

namespace hpcwl::perf {

// Per-core memory in bytes: sum over NUMA nodes of
// MemTotal - MemFree - FilePages - Slab, divided by the node's core count.
// Throws InvalidMemInfo on negative components or n_cores < 1.
double memory_per_core(const MemInfoSample& sample, std::int64_t n_cores);

struct NonLustreIb {
  double bytes = 0.0;
  bool clamped = false;  // Lustre traffic exceeded total InfiniBand traffic
};

NonLustreIb non_lustre_ib(double ib_total, double lustre_total);

LaunchType classify_launch_type(std::int64_t n_processes, std::int64_t threads_per_process,
                                bool instrumented);

struct CounterDelta {
  double delta = 0.0;
  bool regressed = false;
};

// Accumulated increase over a time-ordered run of counter readings. A decrease is
// treated as a counter reset: that segment contributes the post-reset value.
CounterDelta counter_delta(std::span<const double> readings);

struct SummarizeOptions {
  const appident::AppDatabase* app_db = nullptr;
  const appident::IgnoreList* ignore = nullptr;
};

// Counter metrics: reading at or before start through reading at or after end, summed
// over the job's nodes. Instantaneous metrics: samples with start < t < end only.
// Returns nullopt when the job's node list is unknown (archive.nodes empty).
std::optional<JobPerfSummary> summarize_job(const JobRecord& job, const JobArchive& archive,
                                            std::int64_t cores_per_node,
                                            const SummarizeOptions& options = {});

// Absent fields are omitted. The app label is the reported (masked) one.
nlohmann::json to_json(const JobPerfSummary& s);

}  // namespace hpcwl::perf
