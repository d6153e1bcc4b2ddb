#pragma once

#include <span>
#include <vector>

#include "hpcwl/metrics/common.hpp"

namespace hpcwl::metrics {

// 1, 2-4, 5-8, ..., 65537-131072 as closed-open edges; >131072 is the overflow bin.
std::vector<double> default_job_size_edges();

// Integer-edged bins labelled "a" or "a-b" with an overflow bin ">last". Edges must be
// strictly increasing. by_nodes bins node counts instead of core counts.
Histogram1D job_size_distribution(std::span<const JobRecord> jobs, const ResourceMap& resources,
                                  WeightKind weight, std::vector<double> edges = {},
                                  bool by_nodes = false);

inline constexpr double kDefaultKrakenFactor = 2.04;

// SU factor per core-hour at the job's end date; node-hour factors are divided by the
// resource's cores per node.
double per_core_factor(const JobRecord& job, const ResourceMap& resources);

// cores * per_core_factor / kraken_factor.
double effective_cores(const JobRecord& job, const ResourceMap& resources, double kraken_factor);

// Unweighted: mean of cores'. Weighted: sum(cores' * xd_su) / sum(xd_su).
// cores' is the effective count when `effective` is set. Throws DegenerateInput on an
// empty input (or zero total XD SU when weighted) and NoFactorForDate as needed.
double average_job_size(std::span<const JobRecord> jobs, const ResourceMap& resources,
                        bool weighted_by_xd_su, bool effective,
                        double kraken_factor = kDefaultKrakenFactor);

struct AverageSizeRow {
  std::string period;
  std::size_t jobs = 0;
  double average = 0.0;
  double effective_average = 0.0;
  double weighted_average = 0.0;
  double weighted_effective_average = 0.0;
};

std::vector<AverageSizeRow> average_job_size_series(std::span<const JobRecord> jobs,
                                                    const ResourceMap& resources, Period period,
                                                    double kraken_factor = kDefaultKrakenFactor);

struct SingleNodeRow {
  std::string period;
  std::size_t jobs = 0;
  double pct_jobs_single_node = 0.0;
  double pct_xd_su_single_node = 0.0;
  double pct_xd_su_serial = 0.0;
};

// single node: nodes == 1; serial: cores == 1.
std::vector<SingleNodeRow> single_node_serial_fractions(std::span<const JobRecord> jobs,
                                                        const ResourceMap& resources,
                                                        bool exclude_osg, Period period);

Table to_table(std::span<const AverageSizeRow> rows);
Table to_table(std::span<const SingleNodeRow> rows);

}  // namespace hpcwl::metrics
