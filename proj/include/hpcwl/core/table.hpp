#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace hpcwl {

// Empty cells (monostate) print as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

// Shortest round-trip decimal, '.' separator, independent of locale.
std::string format_number(double v);
std::string format_cell(const Cell& c);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table() = default;
  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
  // Array of row objects; keys sorted by nlohmann's ordered map.
  nlohmann::json to_json() const;
};

}  // namespace hpcwl
