#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "hpcwl/core/errors.hpp"
#include "hpcwl/stats/exit_codes.hpp"
#include "hpcwl/stats/logistic.hpp"
#include "hpcwl/stats/lomb_scargle.hpp"

namespace hpcwl::stats {
namespace {

struct Sample {
  std::vector<double> x;
  std::vector<int> y;
};

Sample draw_logistic(std::uint64_t seed, std::size_t n, double b0, double b1, double xmax) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, xmax), u01(0.0, 1.0);
  Sample s;
  for (std::size_t i = 0; i < n; ++i) {
    double x = ux(rng);
    double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * x)));
    s.x.push_back(x);
    s.y.push_back(u01(rng) < p ? 1 : 0);
  }
  return s;
}

TEST(LombScargle, WeeklySinusoidPeak) {
  std::vector<double> t, y;
  for (int h = 0; h < 90 * 24; ++h) {
    t.push_back(h / 24.0);
    y.push_back(10.0 + 3.0 * std::sin(2 * std::numbers::pi * t.back() / 7.0));
  }
  auto grid = default_frequency_grid(90.0);
  auto p = lomb_scargle(t, y, grid);
  auto peaks = find_peaks(p, 1);
  ASSERT_EQ(peaks.size(), 1u);
  double step = grid[1] - grid[0];
  EXPECT_NEAR(peaks[0].frequency, 1.0 / 7.0, step);
  EXPECT_NEAR(peaks[0].period, 7.0, 7.0 * 7.0 * step);
}

TEST(LombScargle, ConstantSeriesIsDegenerate) {
  std::vector<double> t = {0, 1, 2, 3}, y(4, 5.0), f = {0.1, 0.2};
  EXPECT_THROW(lomb_scargle(t, y, f), DegenerateInput);
  std::vector<double> t2 = {0, 1}, y2 = {1, 2};
  EXPECT_THROW(lomb_scargle(t2, y2, f), DegenerateInput);
}

TEST(LombScargle, MatchesDirectFormula) {
  std::vector<double> t = {0.0, 0.3, 1.1, 1.7, 2.2, 3.9, 4.4, 5.0};
  std::vector<double> y = {1.0, 2.5, 0.4, 3.3, 2.2, 0.9, 1.8, 2.7};
  std::vector<double> f = {0.13, 0.5, 1.7};
  auto p = lomb_scargle(t, y, f);
  double mean = 0, var = 0;
  for (double v : y) mean += v;
  mean /= y.size();
  for (double v : y) var += (v - mean) * (v - mean);
  var /= y.size() - 1;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double w = 2 * std::numbers::pi * f[k];
    double s2 = 0, c2 = 0;
    for (double ti : t) {
      s2 += std::sin(2 * w * ti);
      c2 += std::cos(2 * w * ti);
    }
    double tau = std::atan2(s2, c2) / (2 * w);
    double yc = 0, ys = 0, cc = 0, ss = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      double c = std::cos(w * (t[i] - tau)), s = std::sin(w * (t[i] - tau));
      yc += (y[i] - mean) * c;
      ys += (y[i] - mean) * s;
      cc += c * c;
      ss += s * s;
    }
    EXPECT_NEAR(p.powers[k], (yc * yc / cc + ys * ys / ss) / (2 * var), 1e-10);
  }
}

TEST(LombScargleProperty, AffineInvariance) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> t, y, y2;
  for (int i = 0; i < 200; ++i) {
    t.push_back(i * 0.25 + 0.01 * (i % 3));
    y.push_back(n(rng));
    y2.push_back(4.0 * y.back() + 17.0);
  }
  auto f = default_frequency_grid(t.back() - t.front());
  auto a = lomb_scargle(t, y, f), b = lomb_scargle(t, y2, f);
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(a.powers[k], b.powers[k], 1e-9 * (1 + a.powers[k]));
}

TEST(LombScargle, DefaultGridBounds) {
  auto g = default_frequency_grid(100.0);
  EXPECT_DOUBLE_EQ(g.front(), kMinFrequency);
  EXPECT_LE(g.back(), kMaxFrequency);
  EXPECT_NEAR(g[1] - g[0], 1.0 / 400.0, 1e-15);
}

TEST(BinEvents, IncludesEmptyBins) {
  std::vector<UnixSeconds> ev = {7200, 7300, 14400 + 10};
  auto b = bin_events(ev, 3600);
  ASSERT_EQ(b.y.size(), 3u);
  EXPECT_EQ(b.y[0], 2.0);
  EXPECT_EQ(b.y[1], 0.0);
  EXPECT_EQ(b.y[2], 1.0);
  EXPECT_EQ(b.origin, 7200);
  EXPECT_DOUBLE_EQ(b.t[1] - b.t[0], 1.0 / 24.0);
}

TEST(Logistic, GradientMatchesFiniteDifference) {
  auto s = draw_logistic(1, 500, -1.0, 0.3, 10.0);
  for (auto [b0, b1] : {std::pair{-1.0, 0.3}, std::pair{0.5, -0.2}, std::pair{-3.0, 1.0}}) {
    auto g = gradient(s.x, s.y, b0, b1);
    double h = 1e-6;
    double d0 = (log_likelihood(s.x, s.y, b0 + h, b1) - log_likelihood(s.x, s.y, b0 - h, b1)) / (2 * h);
    double d1 = (log_likelihood(s.x, s.y, b0, b1 + h) - log_likelihood(s.x, s.y, b0, b1 - h)) / (2 * h);
    EXPECT_NEAR(g[0], d0, 1e-4 * (1 + std::abs(d0)));
    EXPECT_NEAR(g[1], d1, 1e-4 * (1 + std::abs(d1)));
  }
}

TEST(Logistic, RecoversCoefficients) {
  auto s = draw_logistic(2, 50000, -2.0, 0.5, 8.0);
  auto fit = fit_logistic(s.x, s.y);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.beta[0], -2.0, 0.1);
  EXPECT_NEAR(fit.beta[1], 0.5, 0.025);
  EXPECT_LT(fit.p_value[1], 1e-10);
  auto g = gradient(s.x, s.y, fit.beta[0], fit.beta[1]);
  EXPECT_LT(std::abs(g[0]), 1e-6 * static_cast<double>(s.x.size()));
  EXPECT_LT(std::abs(g[1]), 1e-6 * static_cast<double>(s.x.size()));
}

TEST(Logistic, ErrorShrinksWithSampleSize) {
  double err_small = 0, err_large = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto a = draw_logistic(100 + seed, 10000, -1.0, 0.4, 6.0);
    auto b = draw_logistic(200 + seed, 100000, -1.0, 0.4, 6.0);
    err_small += std::abs(fit_logistic(a.x, a.y).beta[1] - 0.4);
    err_large += std::abs(fit_logistic(b.x, b.y).beta[1] - 0.4);
  }
  EXPECT_LT(err_large, err_small);
}

TEST(LogisticProperty, PermutationInvariant) {
  auto s = draw_logistic(3, 2000, -0.5, 0.2, 10.0);
  auto base = fit_logistic(s.x, s.y);
  std::vector<std::size_t> idx(s.x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(4);
  std::shuffle(idx.begin(), idx.end(), rng);
  Sample p;
  for (auto i : idx) {
    p.x.push_back(s.x[i]);
    p.y.push_back(s.y[i]);
  }
  auto perm = fit_logistic(p.x, p.y);
  EXPECT_NEAR(perm.beta[0], base.beta[0], 1e-8);
  EXPECT_NEAR(perm.beta[1], base.beta[1], 1e-8);
}

TEST(Logistic, SeparationDetected) {
  std::vector<double> x;
  std::vector<int> y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i);
    y.push_back(i >= 20 ? 1 : 0);
  }
  EXPECT_THROW(fit_logistic(x, y), SeparationDetected);
}

TEST(Logistic, SingleOutcomeIsDegenerate) {
  std::vector<double> x = {1, 2, 3, 4};
  std::vector<int> y = {1, 1, 1, 1};
  EXPECT_THROW(fit_logistic(x, y), DegenerateInput);
}

TEST(LogisticProperty, PredictMonotoneInSlopeSign) {
  auto s = draw_logistic(6, 5000, -3.0, 0.6, 10.0);
  auto fit = fit_logistic(s.x, s.y);
  ASSERT_GT(fit.beta[1], 0.0);
  double prev = -1.0;
  for (double x = 0; x <= 10; x += 0.5) {
    double p = predict(fit, x);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_GT(p, prev);
    prev = p;
  }
}

TEST(DesignMatrix, ExcludesUnavailableAndZeroWall) {
  std::vector<JobRecord> jobs = {test::job("1", "R", 0, 0, 3600, 4), test::job("2", "R", 0, 0, 0, 2),
                                 test::job("3", "R", 0, 0, 7200, 1)};
  jobs[0].exit_status = ExitStatus::node_fail;
  jobs[2].exit_status = ExitStatus::not_available;
  auto lin = design_matrix(jobs, CovariateModel::nodes_linear, FailureLabel::node_fail);
  ASSERT_EQ(lin.x.size(), 2u);
  EXPECT_EQ(lin.x[0], 4.0);
  EXPECT_EQ(lin.y[0], 1);
  EXPECT_EQ(lin.excluded, 1u);
  auto pw = design_matrix(jobs, CovariateModel::walltime_pow_nodes, FailureLabel::node_fail_or_failed);
  ASSERT_EQ(pw.x.size(), 1u);
  EXPECT_NEAR(pw.x[0], std::pow(3600.0 / kSecondsPerYear, 4.0), 1e-25);
  EXPECT_EQ(pw.excluded, 2u);
}

TEST(ExitCodes, CountsEveryStatus) {
  std::vector<JobRecord> jobs = {test::job("1", "A", 0, 0, 10), test::job("2", "A", 0, 0, 10),
                                 test::job("3", "B", 0, 0, 10)};
  jobs[1].exit_status = ExitStatus::timeout;
  auto rows = exit_code_table(jobs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].group, "A");
  EXPECT_EQ(rows[0].total, 2);
  EXPECT_EQ(rows[0].counts[0], 1);
  EXPECT_EQ(rows[0].counts[2], 1);
  auto all = exit_code_table(jobs, false);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].total, 3);
  auto t = to_table(all);
  EXPECT_EQ(t.columns.size(), std::size(kAllExitStatuses) + 2);
}

}  // namespace
}  // namespace hpcwl::stats
