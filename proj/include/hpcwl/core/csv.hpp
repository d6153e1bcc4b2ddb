#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hpcwl::csv {

struct Record {
  std::size_t line;  // physical line on which the record starts (1-based)
  std::vector<std::string> fields;
};

// RFC-4180 reader: quoted fields may contain commas, doubled quotes and newlines.
// Blank lines are skipped. Throws std::runtime_error on an unterminated quote.
std::vector<Record> read(std::istream& in);

std::string quote(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace hpcwl::csv
