#include "hpcwl/metrics/geo.hpp"

#include <charconv>
#include <fstream>

#include "hpcwl/core/csv.hpp"
#include "hpcwl/core/errors.hpp"

namespace hpcwl::metrics {

StateTable parse_state_table(std::istream& in) {
  auto records = csv::read(in);
  if (records.empty()) throw SchemaError(0, "state", "empty state table");
  const auto& header = records.front().fields;
  if (header.size() != 2 || header[0] != "state" || header[1] != "value")
    throw SchemaError(0, "state", "header must be state,value");
  StateTable out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i].fields;
    if (f.size() != 2) throw SchemaError(i, "value", "expected two columns");
    double v = 0;
    auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), v);
    if (ec != std::errc() || ptr != f[1].data() + f[1].size())
      throw SchemaError(i, "value", "not a number: " + f[1]);
    out[f[0]] = v;
  }
  return out;
}

StateTable load_state_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError(path.string());
  return parse_state_table(in);
}

StateTable usage_by_state(std::span<const JobRecord> jobs, const ResourceMap& resources,
                          WeightKind weight) {
  StateTable out;
  for (const auto& j : jobs)
    if (j.state_of_origin) out[*j.state_of_origin] += job_weight(j, weight, resources);
  return out;
}

std::vector<GeoRow> geo_normalize(const StateTable& usage, const StateTable& population,
                                  const StateTable& tech_index) {
  std::vector<GeoRow> out;
  for (const auto& [state, u] : usage) {
    GeoRow r;
    r.state = state;
    r.usage = u;
    auto pop = population.find(state);
    if (pop != population.end() && pop->second > 0) {
      r.per_capita = u / pop->second;
      auto tech = tech_index.find(state);
      if (tech != tech_index.end() && tech->second > 0)
        r.per_capita_tech = *r.per_capita / tech->second;
      else
        r.missing_divisor = true;
    } else {
      r.missing_divisor = true;
    }
    out.push_back(r);
  }
  return out;
}

Table to_table(std::span<const GeoRow> rows) {
  Table t({"state", "usage", "per_capita", "per_capita_tech", "missing_divisor"});
  for (const auto& r : rows)
    t.add_row({r.state, r.usage, r.per_capita ? Cell{*r.per_capita} : Cell{},
               r.per_capita_tech ? Cell{*r.per_capita_tech} : Cell{},
               std::string(r.missing_divisor ? "true" : "false")});
  return t;
}

}  // namespace hpcwl::metrics
