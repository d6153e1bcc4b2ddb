#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpcwl/core/table.hpp"

namespace hpcwl::metrics {

enum class WeightKind { count, core_hours, node_hours, xd_su };

std::string_view to_string(WeightKind k);
// Accepts "jobs" as an alias for count.
std::optional<WeightKind> parse_weight_kind(std::string_view s);

// Closed-open bins [edges[i], edges[i+1]). Values below the first edge go to underflow,
// values at or above the last edge to overflow (unless close_last is set and the value
// equals the last edge). Records with no value go to the absent bucket.
struct Histogram1D {
  std::vector<double> edges;
  std::vector<std::string> labels;  // one per bin
  std::vector<double> weights;
  double underflow = 0.0;
  double overflow = 0.0;
  double absent = 0.0;
  std::string underflow_label = "underflow";
  std::string overflow_label = "overflow";
  bool close_last = false;
  WeightKind weight_kind = WeightKind::count;
  double population_weight = 0.0;

  static Histogram1D make(std::vector<double> edges, WeightKind kind);

  void add(double x, double w);
  void add_absent(double w);

  double binned_total() const;
  double total() const;

  // Columns: bin, lower, upper, weight. Underflow, overflow and absent rows come last.
  Table to_table() const;
};

// Per-cell weights row-major by x then y. Out-of-range points land in `outside`.
struct Histogram2D {
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  std::vector<double> weights;
  double outside = 0.0;
  double absent = 0.0;
  bool close_last = false;
  WeightKind weight_kind = WeightKind::count;
  double population_weight = 0.0;

  static Histogram2D make(std::vector<double> x_edges, std::vector<double> y_edges,
                          WeightKind kind);

  void add(double x, double y, double w);
  void add_absent(double w);
  double at(std::size_t ix, std::size_t iy) const;
  std::size_t nx() const { return x_edges.size() - 1; }
  std::size_t ny() const { return y_edges.size() - 1; }
  double total() const;

  // Columns: x_lower, x_upper, y_lower, y_upper, weight. Only non-empty cells, then the
  // outside and absent rows.
  Table to_table() const;
};

std::vector<double> linear_edges(double lo, double hi, std::size_t n_bins);
// Decade-spaced edges from 10^lo_exp to 10^hi_exp with `per_decade` bins per decade.
std::vector<double> log_edges(int lo_exp, int hi_exp, int per_decade);

}  // namespace hpcwl::metrics
