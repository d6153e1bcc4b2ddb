#include "hpcwl/stats/lomb_scargle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hpcwl/core/errors.hpp"

namespace hpcwl::stats {

std::vector<double> default_frequency_grid(double span_days) {
  if (!(span_days > 0)) throw DegenerateInput("time span must be positive");
  double step = 1.0 / (kSamplesPerPeak * span_days);
  std::vector<double> f;
  auto n = static_cast<std::size_t>(std::floor((kMaxFrequency - kMinFrequency) / step)) + 1;
  f.reserve(n);
  for (std::size_t i = 0; i < n; ++i) f.push_back(kMinFrequency + static_cast<double>(i) * step);
  return f;
}

Periodogram lomb_scargle(std::span<const double> t, std::span<const double> y,
                         std::span<const double> frequencies) {
  if (t.size() != y.size()) throw DegenerateInput("t and y differ in length");
  if (t.size() < 3) throw DegenerateInput("at least three samples are required");
  for (double f : frequencies)
    if (!(f > 0) || !std::isfinite(f)) throw DegenerateInput("frequencies must be positive and finite");

  const std::size_t n = t.size();
  long double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<long double>(n);
  std::vector<double> yc(n);
  long double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    yc[i] = static_cast<double>(y[i] - mean);
    ss += static_cast<long double>(yc[i]) * yc[i];
  }
  double var = static_cast<double>(ss / static_cast<long double>(n - 1));
  if (!(var > 0)) throw DegenerateInput("constant series");

  Periodogram p;
  p.n_samples = n;
  p.frequencies.assign(frequencies.begin(), frequencies.end());
  p.powers.resize(frequencies.size());
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    double w = two_pi * frequencies[k];
    double yc_c = 0, yc_s = 0, c2 = 0, s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double c = std::cos(w * t[i]);
      double s = std::sin(w * t[i]);
      yc_c += yc[i] * c;
      yc_s += yc[i] * s;
      c2 += c * c - s * s;  // sum cos 2wt
      s2 += 2.0 * c * s;    // sum sin 2wt
    }
    // tan(2 w tau) = sum sin 2wt / sum cos 2wt
    double two_wtau = std::atan2(s2, c2);
    double cos2 = std::cos(two_wtau), sin2 = std::sin(two_wtau);
    double cos1 = std::cos(0.5 * two_wtau), sin1 = std::sin(0.5 * two_wtau);
    double num_c = yc_c * cos1 + yc_s * sin1;
    double num_s = yc_s * cos1 - yc_c * sin1;
    double den_c = 0.5 * (static_cast<double>(n) + cos2 * c2 + sin2 * s2);
    double den_s = static_cast<double>(n) - den_c;
    double power = 0;
    if (den_c > 0) power += num_c * num_c / den_c;
    if (den_s > 0) power += num_s * num_s / den_s;
    p.powers[k] = std::max(0.0, power / (2.0 * var));
  }
  return p;
}

std::vector<Peak> find_peaks(const Periodogram& p, std::size_t max_peaks) {
  std::vector<Peak> peaks;
  const auto& w = p.powers;
  for (std::size_t i = 0; i < w.size(); ++i) {
    bool left = i == 0 || w[i] > w[i - 1];
    bool right = i + 1 == w.size() || w[i] >= w[i + 1];
    if (left && right && w.size() > 1)
      peaks.push_back({p.frequencies[i], 1.0 / p.frequencies[i], w[i]});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.power > b.power; });
  if (max_peaks > 0 && peaks.size() > max_peaks) peaks.resize(max_peaks);
  return peaks;
}

BinnedSeries bin_events(std::span<const UnixSeconds> events, UnixSeconds bin_seconds) {
  if (bin_seconds <= 0) throw DegenerateInput("bin width must be positive");
  BinnedSeries out;
  if (events.empty()) return out;
  auto [lo, hi] = std::minmax_element(events.begin(), events.end());
  UnixSeconds origin = *lo - ((*lo % bin_seconds) + bin_seconds) % bin_seconds;
  auto n = static_cast<std::size_t>((*hi - origin) / bin_seconds) + 1;
  out.origin = origin;
  out.y.assign(n, 0.0);
  for (auto e : events) out.y[static_cast<std::size_t>((e - origin) / bin_seconds)] += 1.0;
  out.t.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.t[i] = (static_cast<double>(i) + 0.5) * static_cast<double>(bin_seconds) /
               static_cast<double>(kSecondsPerDay);
  return out;
}

Table to_table(const Periodogram& p) {
  Table t({"frequency_per_day", "period_days", "power"});
  for (std::size_t i = 0; i < p.powers.size(); ++i)
    t.add_row({p.frequencies[i], 1.0 / p.frequencies[i], p.powers[i]});
  return t;
}

Table to_table(std::span<const Peak> peaks) {
  Table t({"rank", "frequency_per_day", "period_days", "power"});
  std::int64_t rank = 0;
  for (const auto& pk : peaks) t.add_row({++rank, pk.frequency, pk.period, pk.power});
  return t;
}

}  // namespace hpcwl::stats
