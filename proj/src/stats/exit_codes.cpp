#include "hpcwl/stats/exit_codes.hpp"

#include <map>

namespace hpcwl::stats {

std::vector<ExitCodeRow> exit_code_table(std::span<const JobRecord> jobs, bool by_resource) {
  std::map<std::string, ExitCodeRow> acc;
  for (const auto& j : jobs) {
    auto key = by_resource ? j.resource : std::string("All");
    auto& row = acc[key];
    row.group = key;
    ++row.counts[static_cast<std::size_t>(j.exit_status)];
    ++row.total;
  }
  std::vector<ExitCodeRow> out;
  for (auto& [k, r] : acc) out.push_back(std::move(r));
  if (out.empty() && !by_resource) out.push_back({"All", {}, 0});
  return out;
}

Table to_table(std::span<const ExitCodeRow> rows) {
  std::vector<std::string> cols{"group"};
  for (auto s : kAllExitStatuses) cols.emplace_back(to_string(s));
  cols.emplace_back("total");
  Table t(std::move(cols));
  for (const auto& r : rows) {
    std::vector<Cell> row{r.group};
    for (auto c : r.counts) row.emplace_back(c);
    row.emplace_back(r.total);
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace hpcwl::stats
