#pragma once

#include <span>
#include <string>
#include <vector>

#include "hpcwl/metrics/common.hpp"

namespace hpcwl::metrics {

enum class LustreNormalize { per_job, per_node_hour };

std::optional<LustreNormalize> parse_lustre_normalize(std::string_view s);

// Reads are client rx bytes, writes tx bytes. Rates are averaged over the job's wall time
// (bytes/s); per_node_hour divides totals by node-hours and rates by the node count.
struct LustreDistributions {
  Histogram1D opens;
  Histogram1D read_bytes;
  Histogram1D write_bytes;
  Histogram1D read_rate;
  Histogram1D write_rate;
};

// weight is count (unweighted) or node_hours. Jobs without Lustre data go to absent.
LustreDistributions lustre_stats(std::span<const JobView> views, const ResourceMap& resources,
                                 LustreNormalize normalize, WeightKind weight);

struct DailyIo {
  std::string day;  // end_time date
  std::string resource;
  double read_total = 0.0;
  double write_total = 0.0;
  std::size_t jobs = 0;
};

std::vector<DailyIo> lustre_daily(std::span<const JobView> views);

// Long form: metric, bin, lower, upper, weight.
Table to_table(const LustreDistributions& d);
Table to_table(std::span<const DailyIo> rows);

}  // namespace hpcwl::metrics
