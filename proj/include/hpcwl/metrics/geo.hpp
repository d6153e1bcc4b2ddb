#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpcwl/metrics/common.hpp"

namespace hpcwl::metrics {

using StateTable = std::map<std::string, double, std::less<>>;

// CSV with header "state,value".
StateTable parse_state_table(std::istream& in);
StateTable load_state_table(const std::filesystem::path& path);

// Jobs without a state of origin are skipped.
StateTable usage_by_state(std::span<const JobRecord> jobs, const ResourceMap& resources,
                          WeightKind weight);

struct GeoRow {
  std::string state;
  double usage = 0.0;
  std::optional<double> per_capita;
  std::optional<double> per_capita_tech;
  bool missing_divisor = false;  // population or tech index absent or non-positive
};

// per_capita = usage / population; per_capita_tech = per_capita / tech_index.
std::vector<GeoRow> geo_normalize(const StateTable& usage, const StateTable& population,
                                  const StateTable& tech_index);

Table to_table(std::span<const GeoRow> rows);

}  // namespace hpcwl::metrics
