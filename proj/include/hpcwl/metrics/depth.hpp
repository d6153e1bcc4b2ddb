#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpcwl/core/table.hpp"
#include "hpcwl/ingest/types.hpp"

namespace hpcwl::metrics {

enum class DepthBy { cores, nodes };

std::string_view to_string(DepthBy b);
std::optional<DepthBy> parse_depth_by(std::string_view s);

struct ProjectDepth {
  std::string project_id;  // charge number
  std::int64_t depth = 0;  // max cores (or nodes) of any job
  double usage = 0.0;      // core-hours
  std::int64_t job_count = 0;
};

struct DepthProfile {
  DepthBy by = DepthBy::cores;
  std::vector<ProjectDepth> projects;  // sorted by project_id
};

// With a year, only jobs ending in that calendar year (UTC) are counted.
DepthProfile depth_profile(std::span<const JobRecord> jobs, DepthBy by,
                           std::optional<int> year = std::nullopt);

struct JointRatioResult {
  int deep_usage_pct = 0;     // usage share of projects deeper than depth_at_ratio
  int deep_projects_pct = 0;  // 100 - deep_usage_pct
  std::int64_t depth_at_ratio = 0;
  std::size_t projects_at_ratio = 0;  // projects with depth > depth_at_ratio
  double usage_at_ratio = 0.0;
  std::int64_t jobs_at_ratio = 0;

  std::string label() const;  // "73:27"
};

// Projects sorted by depth: the crossing depth is the smallest observed depth d where
// (projects with depth <= d)/N + (usage with depth <= d)/U >= 1.
// Throws EmptyProfile when no project has positive usage.
JointRatioResult joint_ratio(const DepthProfile& profile);

struct WidthPoint {
  std::int64_t depth = 0;
  double projects = 0.0;  // cumulative fractions at depth <= this depth
  double jobs = 0.0;
  double usage = 0.0;
};

// One point per distinct observed depth, ascending.
std::vector<WidthPoint> width_curves(const DepthProfile& profile);

Table to_table(std::span<const WidthPoint> curve);

}  // namespace hpcwl::metrics
