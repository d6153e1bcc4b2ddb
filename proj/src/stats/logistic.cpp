#include "hpcwl/stats/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "hpcwl/core/errors.hpp"

namespace hpcwl::stats {

std::string_view to_string(CovariateModel m) {
  return m == CovariateModel::nodes_linear ? "nodes_linear" : "walltime_pow_nodes";
}

std::optional<CovariateModel> parse_covariate_model(std::string_view s) {
  if (s == "nodes_linear") return CovariateModel::nodes_linear;
  if (s == "walltime_pow_nodes") return CovariateModel::walltime_pow_nodes;
  return std::nullopt;
}

std::string_view to_string(FailureLabel l) {
  return l == FailureLabel::node_fail ? "node_fail" : "node_fail_or_failed";
}

std::optional<FailureLabel> parse_failure_label(std::string_view s) {
  if (s == "node_fail") return FailureLabel::node_fail;
  if (s == "node_fail_or_failed" || s == "combined") return FailureLabel::node_fail_or_failed;
  return std::nullopt;
}

namespace {

// log(1 + exp(e)) without overflow.
long double log1pexp(long double e) {
  return e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
}

long double sigmoid(long double e) {
  if (e >= 0) return 1.0L / (1.0L + std::exp(-e));
  long double z = std::exp(e);
  return z / (1.0L + z);
}

long double ll_std(std::span<const double> z, std::span<const int> y, long double a0, long double a1) {
  long double ll = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    long double e = a0 + a1 * z[i];
    ll += y[i] * e - log1pexp(e);
  }
  return ll;
}

double wald_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

}  // namespace

double log_likelihood(std::span<const double> x, std::span<const int> y, double b0, double b1) {
  return static_cast<double>(ll_std(x, y, b0, b1));
}

std::array<double, 2> gradient(std::span<const double> x, std::span<const int> y, double b0, double b1) {
  long double g0 = 0, g1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double r = y[i] - sigmoid(b0 + static_cast<long double>(b1) * x[i]);
    g0 += r;
    g1 += r * x[i];
  }
  return {static_cast<double>(g0), static_cast<double>(g1)};
}

LogisticFit fit_logistic(std::span<const double> x, std::span<const int> y,
                         const LogisticOptions& options) {
  if (x.size() != y.size()) throw DegenerateInput("x and y differ in length");
  std::size_t n = x.size();
  std::size_t failures = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw DegenerateInput("outcomes must be 0 or 1");
    failures += static_cast<std::size_t>(v);
  }
  if (failures == 0 || failures == n)
    throw DegenerateInput("logistic fit needs at least one failure and one success");

  long double mean = 0;
  for (double v : x) mean += v;
  mean /= static_cast<long double>(n);
  long double var = 0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<long double>(n);
  if (!(var > 0)) throw DegenerateInput("covariate is constant");
  long double sd = std::sqrt(var);

  // Complete or quasi-complete separation on a single covariate.
  double min1 = INFINITY, max1 = -INFINITY, min0 = INFINITY, max0 = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i]) {
      min1 = std::min(min1, x[i]);
      max1 = std::max(max1, x[i]);
    } else {
      min0 = std::min(min0, x[i]);
      max0 = std::max(max0, x[i]);
    }
  }
  if (max0 <= min1 || max1 <= min0) throw SeparationDetected();

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = static_cast<double>((x[i] - mean) / sd);

  long double pbar = static_cast<long double>(failures) / static_cast<long double>(n);
  long double a0 = std::log(pbar / (1 - pbar)), a1 = 0;
  long double ll = ll_std(z, y, a0, a1);
  LogisticFit fit;
  fit.n = n;
  fit.n_failures = failures;
  for (int it = 1; it <= options.max_iterations; ++it) {
    long double g0 = 0, g1 = 0, h00 = 0, h01 = 0, h11 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      long double p = sigmoid(a0 + a1 * z[i]);
      long double r = y[i] - p;
      long double w = p * (1 - p);
      g0 += r;
      g1 += r * z[i];
      h00 += w;
      h01 += w * z[i];
      h11 += w * z[i] * z[i];
    }
    long double det = h00 * h11 - h01 * h01;
    if (!(det > 0)) throw NonConvergence(it);
    long double d0 = (h11 * g0 - h01 * g1) / det;
    long double d1 = (h00 * g1 - h01 * g0) / det;
    long double step = 1;
    long double next = ll_std(z, y, a0 + d0, a1 + d1);
    for (int halving = 0; next < ll && halving < 30; ++halving) {
      step /= 2;
      next = ll_std(z, y, a0 + step * d0, a1 + step * d1);
    }
    a0 += step * d0;
    a1 += step * d1;
    if (std::fabs(a0) > options.separation_limit || std::fabs(a1) > options.separation_limit)
      throw SeparationDetected();
    long double change = std::fabs(next - ll) / std::max<long double>(std::fabs(ll), 1e-300L);
    ll = next;
    fit.iterations = it;
    if (change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged) throw NonConvergence(options.max_iterations);

  long double b1 = a1 / sd;
  long double b0 = a0 - b1 * mean;
  fit.beta = {static_cast<double>(b0), static_cast<double>(b1)};
  fit.log_likelihood = static_cast<double>(ll);

  // Observed information on the original scale.
  long double i00 = 0, i01 = 0, i11 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long double p = sigmoid(a0 + a1 * z[i]);
    long double w = p * (1 - p);
    i00 += w;
    i01 += w * x[i];
    i11 += w * static_cast<long double>(x[i]) * x[i];
  }
  long double det = i00 * i11 - i01 * i01;
  if (det > 0) {
    fit.se = {static_cast<double>(std::sqrt(i11 / det)), static_cast<double>(std::sqrt(i00 / det))};
    for (int k = 0; k < 2; ++k) {
      fit.z[k] = fit.beta[k] / fit.se[k];
      fit.p_value[k] = wald_p(fit.z[k]);
    }
  } else {
    fit.se = {NAN, NAN};
    fit.z = {NAN, NAN};
    fit.p_value = {NAN, NAN};
  }
  return fit;
}

Design design_matrix(std::span<const JobRecord> jobs, CovariateModel model, FailureLabel label) {
  Design d;
  for (const auto& j : jobs) {
    if (j.exit_status == ExitStatus::not_available) {
      ++d.excluded;
      continue;
    }
    double x;
    if (model == CovariateModel::nodes_linear) {
      x = static_cast<double>(j.nodes);
    } else {
      if (j.wall_seconds() <= 0) {
        ++d.excluded;
        continue;
      }
      double years = static_cast<double>(j.wall_seconds()) / kSecondsPerYear;
      double e = static_cast<double>(j.nodes) * std::log(years);
      if (e < -700.0 || e > 50.0) ++d.clamped;
      x = std::exp(std::clamp(e, -700.0, 50.0));
    }
    bool fail = j.exit_status == ExitStatus::node_fail ||
                (label == FailureLabel::node_fail_or_failed && j.exit_status == ExitStatus::failed);
    d.x.push_back(x);
    d.y.push_back(fail ? 1 : 0);
  }
  return d;
}

LogisticFit fit_node_fail(std::span<const JobRecord> jobs, CovariateModel model, FailureLabel label,
                          const LogisticOptions& options) {
  auto d = design_matrix(jobs, model, label);
  auto fit = fit_logistic(d.x, d.y, options);
  fit.model = model;
  fit.clamped_rows = d.clamped;
  fit.excluded_rows = d.excluded;
  return fit;
}

double predict(const LogisticFit& fit, double x) {
  return static_cast<double>(sigmoid(fit.beta[0] + static_cast<long double>(fit.beta[1]) * x));
}

nlohmann::json to_json(const LogisticFit& fit) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  nlohmann::json j;
  j["model"] = std::string(to_string(fit.model));
  j["coefficients"] = {{"intercept", num(fit.beta[0])}, {"slope", num(fit.beta[1])}};
  j["standard_errors"] = {{"intercept", num(fit.se[0])}, {"slope", num(fit.se[1])}};
  j["z"] = {{"intercept", num(fit.z[0])}, {"slope", num(fit.z[1])}};
  j["p_values"] = {{"intercept", num(fit.p_value[0])}, {"slope", num(fit.p_value[1])}};
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["log_likelihood"] = num(fit.log_likelihood);
  j["n"] = fit.n;
  j["n_failures"] = fit.n_failures;
  j["flags"] = {{"clamped_rows", fit.clamped_rows}, {"excluded_rows", fit.excluded_rows}};
  return j;
}

}  // namespace hpcwl::stats
