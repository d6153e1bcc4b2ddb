#pragma once

#include <span>
#include <vector>

namespace hpcwl::stats {

double sum(std::span<const double> xs);
double mean(std::span<const double> xs);

// Even counts take the mean of the two middle values.
double median(std::vector<double> xs);

// Linear interpolation between order statistics (position (n-1)*q).
double quantile_linear(std::vector<double> xs, double q);

// Smallest observed value v with at least ceil(q*n) observations <= v.
double quantile_nearest_rank(std::vector<double> xs, double q);

// Unbiased (n-1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);

double weighted_mean(std::span<const double> xs, std::span<const double> weights);

}  // namespace hpcwl::stats
