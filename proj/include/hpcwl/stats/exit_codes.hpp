#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hpcwl/core/table.hpp"
#include "hpcwl/ingest/types.hpp"

namespace hpcwl::stats {

struct ExitCodeRow {
  std::string group;
  std::array<std::int64_t, std::size(kAllExitStatuses)> counts{};  // kAllExitStatuses order
  std::int64_t total = 0;
};

// One row per resource (sorted) when by_resource, else a single "All" row. Every status
// appears, zero when absent.
std::vector<ExitCodeRow> exit_code_table(std::span<const JobRecord> jobs, bool by_resource = true);

// Columns: group, then one per status, then total.
Table to_table(std::span<const ExitCodeRow> rows);

}  // namespace hpcwl::stats
