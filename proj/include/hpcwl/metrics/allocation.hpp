#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpcwl/core/table.hpp"
#include "hpcwl/ingest/types.hpp"

namespace hpcwl::metrics {

enum class AllocGroupBy { all, resource, alloc_type, discipline };

std::optional<AllocGroupBy> parse_alloc_group_by(std::string_view s);

struct AllocationStats {
  std::string group;
  std::size_t n_alloc = 0;
  std::size_t n_unused = 0;
  // 100 * sum(used) / sum(awarded); absent when nothing was awarded.
  std::optional<double> utilization_pct;
  double total_awarded = 0.0;
  double total_used = 0.0;
  // Over awarded sizes; variance is the (n-1) sample variance.
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;
};

// Throws EmptyGroup for an empty span.
AllocationStats allocation_stats(std::string group, std::span<const AllocationRecord> allocs);

// One row per group value, sorted by group; empty groups never appear.
std::vector<AllocationStats> allocation_utilization(std::span<const AllocationRecord> allocs,
                                                    AllocGroupBy by);

// Largest allocations by awarded SU: everything at or above the awarded value of the
// ceil(k*N)-th largest, so ties at the threshold are all kept. bottom_fraction mirrors it.
std::vector<AllocationRecord> top_fraction(std::span<const AllocationRecord> allocs, double k);
std::vector<AllocationRecord> bottom_fraction(std::span<const AllocationRecord> allocs, double k);

// Rows: All, Top 1%, Top 5%, Top 25%, Bottom 25%.
std::vector<AllocationStats> allocation_size_summary(std::span<const AllocationRecord> allocs);

Table to_table(std::span<const AllocationStats> stats);

}  // namespace hpcwl::metrics
