#pragma once

#include <span>
#include <string>
#include <vector>

#include "hpcwl/core/table.hpp"
#include "hpcwl/metrics/common.hpp"

namespace hpcwl::metrics {

enum class Dimension {
  resource,
  directorate,
  parent_science,
  field_of_science,
  rtype,
  nsf_user_status,
  state
};

std::string_view to_string(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view s);

// Value of the grouping dimension for a job; missing states are "unknown".
std::string dimension_value(const JobRecord& job, Dimension d, const ResourceMap& resources);

struct RollupRow {
  std::string period;
  std::string value;
  double total = 0.0;
  double share_pct = 0.0;
  std::size_t jobs = 0;
};

struct RollupResult {
  std::vector<RollupRow> rows;  // sorted by (period, value)
  // Jobs left out of XD SU weighting because no factor covered their end date.
  std::vector<std::string> unconverted_jobs;
};

// Jobs are attributed to the period containing their end_time.
RollupResult usage_rollup(std::span<const JobRecord> jobs, const ResourceMap& resources,
                          Dimension dimension, WeightKind weight, Period period,
                          const JobFilter& filter = {});

Table to_table(const RollupResult& r);

}  // namespace hpcwl::metrics
