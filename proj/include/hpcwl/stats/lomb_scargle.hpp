#pragma once

#include <span>
#include <vector>

#include "hpcwl/core/table.hpp"
#include "hpcwl/core/time.hpp"

namespace hpcwl::stats {

// Time in days, frequency in cycles per day.
struct Periodogram {
  std::vector<double> frequencies;
  std::vector<double> powers;
  std::size_t n_samples = 0;
};

struct Peak {
  double frequency = 0.0;
  double period = 0.0;  // days
  double power = 0.0;
};

inline constexpr double kMinFrequency = 1.0 / 730.0;  // two-year period
inline constexpr double kMaxFrequency = 12.0;         // two-hour period
inline constexpr double kSamplesPerPeak = 4.0;

// Uniform grid from kMinFrequency to kMaxFrequency with step 1 / (kSamplesPerPeak * span).
std::vector<double> default_frequency_grid(double span_days);

// Classical normalized periodogram with the per-frequency offset tau:
// P = [ (sum y' cos w(t-tau))^2 / sum cos^2 w(t-tau) + (sum y' sin)^2 / sum sin^2 ] / (2 var)
// with y' = y - mean(y), var the (n-1) sample variance and w = 2 pi f.
// Throws DegenerateInput for fewer than three points, constant y, or a bad grid.
Periodogram lomb_scargle(std::span<const double> t, std::span<const double> y,
                         std::span<const double> frequencies);

// Local maxima sorted by power, strongest first.
std::vector<Peak> find_peaks(const Periodogram& p, std::size_t max_peaks = 0);

struct BinnedSeries {
  std::vector<double> t;  // bin centres, days since the first bin start
  std::vector<double> y;  // events per bin
  UnixSeconds origin = 0;
};

// Counts per bin of `bin_seconds`, covering first to last event including empty bins.
BinnedSeries bin_events(std::span<const UnixSeconds> events, UnixSeconds bin_seconds = 3600);

Table to_table(const Periodogram& p);
Table to_table(std::span<const Peak> peaks);

}  // namespace hpcwl::stats
