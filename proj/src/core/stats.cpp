#include "hpcwl/core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hpcwl::stats {

double sum(std::span<const double> xs) {
  long double s = 0;
  for (double x : xs) s += x;
  return static_cast<double>(s);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty set");
  return sum(xs) / static_cast<double>(xs.size());
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of empty set");
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double quantile_linear(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty set");
  if (q < 0 || q > 1) throw std::invalid_argument("quantile outside [0,1]");
  std::sort(xs.begin(), xs.end());
  double pos = q * static_cast<double>(xs.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, xs.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

double quantile_nearest_rank(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty set");
  if (q <= 0 || q > 1) throw std::invalid_argument("quantile outside (0,1]");
  std::sort(xs.begin(), xs.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size())));
  rank = std::clamp<std::size_t>(rank, 1, xs.size());
  return xs[rank - 1];
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  long double acc = 0;
  for (double x : xs) acc += (x - m) * (x - m);
  return static_cast<double>(acc / static_cast<long double>(xs.size() - 1));
}

double weighted_mean(std::span<const double> xs, std::span<const double> weights) {
  if (xs.size() != weights.size()) throw std::invalid_argument("weights size mismatch");
  long double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += static_cast<long double>(xs[i]) * weights[i];
    den += weights[i];
  }
  if (den <= 0) throw std::invalid_argument("weighted mean with zero total weight");
  return static_cast<double>(num / den);
}

}  // namespace hpcwl::stats
