#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hpcwl/ingest/types.hpp"

namespace hpcwl::stats {

enum class CovariateModel { nodes_linear, walltime_pow_nodes };
enum class FailureLabel { node_fail, node_fail_or_failed };

std::string_view to_string(CovariateModel m);
std::optional<CovariateModel> parse_covariate_model(std::string_view s);
std::string_view to_string(FailureLabel l);
std::optional<FailureLabel> parse_failure_label(std::string_view s);

struct LogisticOptions {
  int max_iterations = 100;
  double tolerance = 1e-10;        // relative log-likelihood change
  double separation_limit = 50.0;  // on coefficients of the standardized covariate
};

struct LogisticFit {
  CovariateModel model = CovariateModel::nodes_linear;
  std::array<double, 2> beta{};  // intercept, slope
  std::array<double, 2> se{};
  std::array<double, 2> z{};
  std::array<double, 2> p_value{};  // two-sided Wald
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  std::size_t n = 0;
  std::size_t n_failures = 0;
  std::size_t clamped_rows = 0;   // walltime_pow_nodes exponent clamped
  std::size_t excluded_rows = 0;  // status not_available or zero wall time
};

// Bernoulli log-likelihood of logit p = b0 + b1 x and its gradient.
double log_likelihood(std::span<const double> x, std::span<const int> y, double b0, double b1);
std::array<double, 2> gradient(std::span<const double> x, std::span<const int> y, double b0, double b1);

// Newton/IRLS with step halving. The covariate is standardized internally and the
// coefficients are mapped back to the original scale. Throws DegenerateInput without both
// outcomes, SeparationDetected, or NonConvergence.
LogisticFit fit_logistic(std::span<const double> x, std::span<const int> y,
                         const LogisticOptions& options = {});

struct Design {
  std::vector<double> x;
  std::vector<int> y;
  std::size_t clamped = 0;
  std::size_t excluded = 0;
};

inline constexpr double kSecondsPerYear = 365.0 * 86400.0;

// nodes_linear: x = nodes. walltime_pow_nodes: x = exp(clamp(nodes * ln(wall_years), -700, 50)).
// Jobs with status not_available, and zero-wall jobs for walltime_pow_nodes, are excluded.
Design design_matrix(std::span<const JobRecord> jobs, CovariateModel model, FailureLabel label);

LogisticFit fit_node_fail(std::span<const JobRecord> jobs, CovariateModel model,
                          FailureLabel label = FailureLabel::node_fail,
                          const LogisticOptions& options = {});

double predict(const LogisticFit& fit, double x);

nlohmann::json to_json(const LogisticFit& fit);

}  // namespace hpcwl::stats
