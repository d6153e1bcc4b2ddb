#pragma once

#include <vector>

#include "hpcwl/ingest/dataset.hpp"

namespace hpcwl {

// Jobs running longer than this on a Cloud resource are treated as aggregated accounting rows.
inline constexpr UnixSeconds kAggregatedAccountingSeconds = 30 * kSecondsPerDay;

// Never throws. Flags: production_window (job starts outside the resource's production
// dates), geometry (more nodes or cores than the resource has), aggregated_accounting.
std::vector<QualityFlag> validate(const Dataset& ds);

bool is_aggregated_accounting(const JobRecord& job, const ResourceSpec& resource);

}  // namespace hpcwl
