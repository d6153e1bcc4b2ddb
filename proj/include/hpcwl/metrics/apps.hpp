#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpcwl/metrics/common.hpp"

namespace hpcwl::metrics {

// Usage and resource profile per reported application label. Jobs without a summary
// are labelled "NA". Profile means are core-hour weighted over jobs that have the field;
// traffic figures are bytes per node-hour.
struct AppUsageRow {
  std::string app;
  std::size_t jobs = 0;
  double xd_su = 0.0;
  double core_hours = 0.0;
  double node_hours = 0.0;
  std::optional<double> cpu_user_fraction;
  std::optional<double> mem_avg_per_core;
  std::optional<double> lustre_per_node_hour;
  std::optional<double> ib_per_node_hour;
  std::optional<double> non_lustre_ib_per_node_hour;
};

// Sorted by XD SU, largest first, then by label.
std::vector<AppUsageRow> app_usage(std::span<const JobView> views, const ResourceMap& resources);

Table to_table(std::span<const AppUsageRow> rows);

}  // namespace hpcwl::metrics
