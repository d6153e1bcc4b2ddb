#include "hpcwl/metrics/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "hpcwl/core/errors.hpp"

namespace hpcwl::metrics {

std::string_view to_string(WeightKind k) {
  switch (k) {
    case WeightKind::count: return "jobs";
    case WeightKind::core_hours: return "core_hours";
    case WeightKind::node_hours: return "node_hours";
    case WeightKind::xd_su: return "xd_su";
  }
  return "jobs";
}

std::optional<WeightKind> parse_weight_kind(std::string_view s) {
  if (s == "jobs" || s == "count") return WeightKind::count;
  if (s == "core_hours") return WeightKind::core_hours;
  if (s == "node_hours") return WeightKind::node_hours;
  if (s == "xd_su") return WeightKind::xd_su;
  return std::nullopt;
}

namespace {

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw DegenerateInput("histogram needs at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw DegenerateInput("histogram edges must be strictly increasing");
}

void check_weight(double w) {
  if (!(w >= 0) || !std::isfinite(w)) throw DegenerateInput("histogram weights must be finite and >= 0");
}

// Bin index, -1 for underflow, n for overflow.
std::ptrdiff_t locate(const std::vector<double>& edges, double x, bool close_last) {
  auto n = static_cast<std::ptrdiff_t>(edges.size()) - 1;
  if (x < edges.front()) return -1;
  if (x >= edges.back()) return (close_last && x == edges.back()) ? n - 1 : n;
  auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return (it - edges.begin()) - 1;
}

}  // namespace

Histogram1D Histogram1D::make(std::vector<double> edges, WeightKind kind) {
  check_edges(edges);
  Histogram1D h;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    h.labels.push_back("[" + format_number(edges[i]) + "," + format_number(edges[i + 1]) + ")");
  h.weights.assign(edges.size() - 1, 0.0);
  h.edges = std::move(edges);
  h.weight_kind = kind;
  return h;
}

void Histogram1D::add(double x, double w) {
  check_weight(w);
  population_weight += w;
  if (std::isnan(x)) {
    absent += w;
    return;
  }
  auto i = locate(edges, x, close_last);
  if (i < 0)
    underflow += w;
  else if (i >= static_cast<std::ptrdiff_t>(weights.size()))
    overflow += w;
  else
    weights[static_cast<std::size_t>(i)] += w;
}

void Histogram1D::add_absent(double w) {
  check_weight(w);
  population_weight += w;
  absent += w;
}

double Histogram1D::binned_total() const {
  double t = underflow + overflow;
  for (double w : weights) t += w;
  return t;
}

double Histogram1D::total() const { return binned_total() + absent; }

Table Histogram1D::to_table() const {
  Table t({"bin", "lower", "upper", "weight"});
  for (std::size_t i = 0; i < weights.size(); ++i)
    t.add_row({labels[i], edges[i], edges[i + 1], weights[i]});
  t.add_row({underflow_label, Cell{}, edges.front(), underflow});
  t.add_row({overflow_label, edges.back(), Cell{}, overflow});
  t.add_row({std::string("absent"), Cell{}, Cell{}, absent});
  return t;
}

Histogram2D Histogram2D::make(std::vector<double> x_edges, std::vector<double> y_edges,
                              WeightKind kind) {
  check_edges(x_edges);
  check_edges(y_edges);
  Histogram2D h;
  h.weights.assign((x_edges.size() - 1) * (y_edges.size() - 1), 0.0);
  h.x_edges = std::move(x_edges);
  h.y_edges = std::move(y_edges);
  h.weight_kind = kind;
  return h;
}

void Histogram2D::add(double x, double y, double w) {
  check_weight(w);
  population_weight += w;
  if (std::isnan(x) || std::isnan(y)) {
    absent += w;
    return;
  }
  auto ix = locate(x_edges, x, close_last);
  auto iy = locate(y_edges, y, close_last);
  if (ix < 0 || iy < 0 || ix >= static_cast<std::ptrdiff_t>(nx()) ||
      iy >= static_cast<std::ptrdiff_t>(ny())) {
    outside += w;
    return;
  }
  weights[static_cast<std::size_t>(ix) * ny() + static_cast<std::size_t>(iy)] += w;
}

void Histogram2D::add_absent(double w) {
  check_weight(w);
  population_weight += w;
  absent += w;
}

double Histogram2D::at(std::size_t ix, std::size_t iy) const { return weights.at(ix * ny() + iy); }

double Histogram2D::total() const {
  double t = outside + absent;
  for (double w : weights) t += w;
  return t;
}

Table Histogram2D::to_table() const {
  Table t({"cell", "x_lower", "x_upper", "y_lower", "y_upper", "weight"});
  for (std::size_t ix = 0; ix < nx(); ++ix)
    for (std::size_t iy = 0; iy < ny(); ++iy) {
      double w = at(ix, iy);
      if (w == 0.0) continue;
      t.add_row({std::string("bin"), x_edges[ix], x_edges[ix + 1], y_edges[iy], y_edges[iy + 1], w});
    }
  t.add_row({std::string("outside"), Cell{}, Cell{}, Cell{}, Cell{}, outside});
  t.add_row({std::string("absent"), Cell{}, Cell{}, Cell{}, Cell{}, absent});
  return t;
}

std::vector<double> linear_edges(double lo, double hi, std::size_t n_bins) {
  if (n_bins == 0 || !(hi > lo)) throw DegenerateInput("linear_edges needs hi > lo and n_bins > 0");
  std::vector<double> e(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
  e.back() = hi;
  return e;
}

std::vector<double> log_edges(int lo_exp, int hi_exp, int per_decade) {
  if (hi_exp <= lo_exp || per_decade < 1) throw DegenerateInput("log_edges needs hi_exp > lo_exp");
  std::vector<double> e;
  int steps = (hi_exp - lo_exp) * per_decade;
  for (int i = 0; i <= steps; ++i)
    e.push_back(std::pow(10.0, lo_exp + static_cast<double>(i) / per_decade));
  return e;
}

}  // namespace hpcwl::metrics
