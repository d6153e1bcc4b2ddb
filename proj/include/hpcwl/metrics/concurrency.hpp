#pragma once

#include <span>
#include <string>
#include <vector>

#include "hpcwl/metrics/common.hpp"

namespace hpcwl::metrics {

// Node-hours by median runnable threads per node: one bin per integer count from 0 up
// to the largest cores_per_node among the jobs' resources, then an overflow bin.
// Jobs without a runnable-thread median land in the absent (N/A) bucket.
Histogram1D runnable_threads_histogram(std::span<const JobView> views,
                                       const ResourceMap& resources);

struct LaunchTypeRow {
  std::string period;
  std::string launch_type;
  double xd_su = 0.0;
  std::size_t jobs = 0;
};

std::vector<LaunchTypeRow> launch_type_series(std::span<const JobView> views,
                                              const ResourceMap& resources, Period period);

struct ProcessBandRow {
  std::string band;  // "<=32", ">32<=68", ">68", "N/A"
  double xd_su = 0.0;
  std::size_t jobs = 0;
};

// Bands by processes (times threads) per node; the thresholds default to 32 and 68.
std::vector<ProcessBandRow> process_bands(std::span<const JobView> views,
                                          const ResourceMap& resources, double low = 32,
                                          double high = 68);

Table to_table(std::span<const LaunchTypeRow> rows);
Table to_table(std::span<const ProcessBandRow> rows);

}  // namespace hpcwl::metrics
