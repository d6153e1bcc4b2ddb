#include "hpcwl/core/table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hpcwl/core/csv.hpp"

namespace hpcwl {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("row width " + std::to_string(row.size()) + " != " +
                           std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column '" + name + "'");
}

void Table::write_csv(std::ostream& out) const {
  csv::write_row(out, columns);
  std::vector<std::string> fields;
  for (const auto& row : rows) {
    fields.clear();
    for (const auto& c : row) fields.push_back(format_cell(c));
    csv::write_row(out, fields);
  }
}

std::string Table::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

nlohmann::json Table::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const Cell& c = row[i];
      if (std::holds_alternative<std::monostate>(c)) {
        obj[columns[i]] = nullptr;
      } else if (auto* n = std::get_if<std::int64_t>(&c)) {
        obj[columns[i]] = *n;
      } else if (auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          obj[columns[i]] = *d;
        else
          obj[columns[i]] = format_number(*d);
      } else {
        obj[columns[i]] = std::get<std::string>(c);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

}  // namespace hpcwl
