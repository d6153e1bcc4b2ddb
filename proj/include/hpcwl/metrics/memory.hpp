#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hpcwl/metrics/common.hpp"

namespace hpcwl::metrics {

enum class MemoryMode { per_core_avg, per_core_max };
enum class MemXAxis { fraction_cores_of_system, cpu_user_fraction, nodes };
enum class MemYAxis { fraction_mem_used, total_peak_mem };
enum class LargeMemGroup { parent_science, application };

std::optional<MemoryMode> parse_memory_mode(std::string_view s);
std::optional<MemXAxis> parse_mem_x_axis(std::string_view s);
std::optional<MemYAxis> parse_mem_y_axis(std::string_view s);
std::optional<LargeMemGroup> parse_large_mem_group(std::string_view s);

// 0 to 8 GiB per core in 0.25 GiB steps, bytes.
std::vector<double> default_memory_edges();

// Memory per node: mean MemTotal seen in the job's samples, else the resource's mem_per_node.
std::optional<double> node_memory(const JobView& v, const ResourceMap& resources);

// Peak memory used on a node as a fraction of node memory.
std::optional<double> peak_memory_fraction(const JobView& v, const ResourceMap& resources);

// Jobs without memory data go to the absent bucket.
Histogram1D memory_histogram(std::span<const JobView> views, const ResourceMap& resources,
                             MemoryMode mode, WeightKind weight = WeightKind::core_hours,
                             std::vector<double> edges = {});

// x: job cores / system cores, cpu user fraction, or node count.
// y: average memory used on a node / node memory, or total peak memory of the job (bytes).
Histogram2D memory_2d(std::span<const JobView> views, const ResourceMap& resources, MemXAxis x,
                      MemYAxis y, WeightKind weight, std::vector<double> x_edges = {},
                      std::vector<double> y_edges = {});

struct LargeMemoryRow {
  std::string group;
  double normal_queue_xd_su = 0.0;
  double large_queue_xd_su = 0.0;
};

struct LargeMemoryResult {
  std::vector<LargeMemoryRow> rows;  // sorted by group
  double absent_xd_su = 0.0;         // jobs with no memory data
};

// Large-memory queue jobs count when peak fraction > large_threshold; other queues
// when peak fraction > normal_threshold. Application groups use the reported (masked) label.
LargeMemoryResult large_memory_breakdown(std::span<const JobView> views,
                                         const ResourceMap& resources, LargeMemGroup group,
                                         double normal_threshold = 0.80,
                                         double large_threshold = 0.10);

Table to_table(const LargeMemoryResult& r);

}  // namespace hpcwl::metrics
