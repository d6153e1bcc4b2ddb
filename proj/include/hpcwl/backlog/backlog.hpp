#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpcwl/core/table.hpp"
#include "hpcwl/ingest/types.hpp"

namespace hpcwl::backlog {

// Replay of an observed trace. A job is queued during [submit, start) and running during
// [start, end). No scheduler is simulated.

enum class Sampling { event, daily };

std::optional<Sampling> parse_sampling(std::string_view s);

struct BacklogPoint {
  UnixSeconds time = 0;
  double queued_core_years = 0.0;  // cores * eventual wall hours / (24 * 365), summed
  std::int64_t queued_core_seconds = 0;
  std::int64_t running_nodes = 0;
  std::int64_t queued_nodes = 0;
  std::int64_t required_nodes = 0;  // running + queued
  std::int64_t running_cores = 0;
  std::int64_t queued_cores = 0;
  std::int64_t queued_jobs = 0;
  std::int64_t running_jobs = 0;
  bool over_capacity = false;  // running_nodes above the resource's node count
};

// State after applying every event at `time`. Event sampling emits one point per distinct
// event time; daily sampling one point per UTC midnight spanning the trace.
// actual_nodes = 0 disables the capacity check.
std::vector<BacklogPoint> backlog_series(std::span<const JobRecord> jobs, Sampling sampling,
                                         std::int64_t actual_nodes = 0);

std::vector<JobRecord> jobs_on(std::span<const JobRecord> jobs, std::string_view resource);

struct WaitStats {
  std::string group;
  std::size_t jobs = 0;
  // Hours. Quartiles interpolate linearly between order statistics.
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  // Weighted by core-hours; absent when every job has zero core-hours.
  std::optional<double> core_hour_weighted_mean;
};

// Throws EmptyGroup for an empty span.
WaitStats wait_stats(std::string group, std::span<const JobRecord> jobs);
// One row per resource, sorted by name.
std::vector<WaitStats> wait_stats_by_resource(std::span<const JobRecord> jobs);

// Required nodes (and cores) at each job's submit instant, in input order. The submitting
// job always counts, even when it has zero duration.
struct Requirement {
  std::int64_t nodes = 0;
  std::int64_t cores = 0;
};
std::vector<Requirement> required_at_submit(std::span<const JobRecord> jobs);

struct Capacity {
  double target = 0.0;
  std::int64_t nodes = 0;
  std::int64_t cores = 0;
  double node_ratio = 0.0;  // nodes / actual nodes
  double core_ratio = 0.0;
  bool time_weighted = false;
};

// Job-weighted: nearest-rank quantile of required_at_submit. Time-weighted: smallest
// level that covers `target` of the trace duration. Requires 0 < target < 1.
Capacity capacity_for_percentile(std::span<const JobRecord> jobs, const ResourceSpec& resource,
                                 double target, bool time_weighted = false);

struct UserDepth {
  std::string user;
  bool community = false;
  std::int64_t max_concurrent = 0;  // jobs in [submit, end) at once
  std::int64_t total_jobs = 0;
};

// Sorted by user id.
std::vector<UserDepth> user_queue_depth(std::span<const JobRecord> jobs,
                                        const std::vector<std::string>& community_users = {});

Table to_table(std::span<const BacklogPoint> series);
Table to_table(std::span<const WaitStats> rows);
Table to_table(std::span<const UserDepth> rows);

// One row per resource with actual, 95% and 99% nodes and cores plus ratios.
struct CapacityRow {
  std::string resource;
  std::int64_t actual_nodes = 0;
  std::int64_t actual_cores = 0;
  Capacity p95;
  Capacity p99;
};
Table to_table(std::span<const CapacityRow> rows);

}  // namespace hpcwl::backlog
