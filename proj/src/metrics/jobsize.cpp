#include "hpcwl/metrics/jobsize.hpp"

#include <cmath>
#include <map>

#include "hpcwl/core/errors.hpp"
#include "hpcwl/ingest/su.hpp"

namespace hpcwl::metrics {

std::vector<double> default_job_size_edges() {
  std::vector<double> e{1.0};
  for (double p = 1; p <= 131072; p *= 2) e.push_back(p + 1);
  return e;
}

namespace {

std::string int_label(double v) { return std::to_string(static_cast<long long>(std::llround(v))); }

}  // namespace

Histogram1D job_size_distribution(std::span<const JobRecord> jobs, const ResourceMap& resources,
                                  WeightKind weight, std::vector<double> edges, bool by_nodes) {
  if (edges.empty()) edges = default_job_size_edges();
  auto h = Histogram1D::make(edges, weight);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i];
    double hi = edges[i + 1] - 1;
    h.labels[i] = hi <= lo ? int_label(lo) : int_label(lo) + "-" + int_label(hi);
  }
  h.overflow_label = ">" + int_label(edges.back() - 1);
  h.underflow_label = "<" + int_label(edges.front());
  for (const auto& j : jobs)
    h.add(static_cast<double>(by_nodes ? j.nodes : j.cores), job_weight(j, weight, resources));
  return h;
}

double per_core_factor(const JobRecord& job, const ResourceMap& resources) {
  auto it = resources.find(job.resource);
  if (it == resources.end()) throw UnknownResource(job.resource);
  const auto& r = it->second;
  double f = su_factor(r, Date::from_unix(job.end_time));
  if (r.su_unit == SuUnit::node_hour) {
    if (r.cores_per_node < 1) throw MissingGeometry(r.name);
    f /= static_cast<double>(r.cores_per_node);
  }
  return f;
}

double effective_cores(const JobRecord& job, const ResourceMap& resources, double kraken_factor) {
  if (!(kraken_factor > 0)) throw DegenerateInput("reference factor must be positive");
  return static_cast<double>(job.cores) * per_core_factor(job, resources) / kraken_factor;
}

double average_job_size(std::span<const JobRecord> jobs, const ResourceMap& resources,
                        bool weighted_by_xd_su, bool effective, double kraken_factor) {
  if (jobs.empty()) throw DegenerateInput("average_job_size on an empty job list");
  long double num = 0;
  long double den = 0;
  for (const auto& j : jobs) {
    double c = effective ? effective_cores(j, resources, kraken_factor) : static_cast<double>(j.cores);
    double w = weighted_by_xd_su ? job_xd_su(j, resources) : 1.0;
    num += static_cast<long double>(c) * w;
    den += w;
  }
  if (den <= 0) throw DegenerateInput("total XD SU is zero");
  return static_cast<double>(num / den);
}

std::vector<AverageSizeRow> average_job_size_series(std::span<const JobRecord> jobs,
                                                    const ResourceMap& resources, Period period,
                                                    double kraken_factor) {
  std::map<std::string, std::vector<JobRecord>> groups;
  for (const auto& j : jobs) groups[period_label(j.end_time, period)].push_back(j);
  std::vector<AverageSizeRow> out;
  for (const auto& [p, g] : groups) {
    AverageSizeRow r;
    r.period = p;
    r.jobs = g.size();
    r.average = average_job_size(g, resources, false, false, kraken_factor);
    r.effective_average = average_job_size(g, resources, false, true, kraken_factor);
    double su = 0;
    for (const auto& j : g) su += job_xd_su(j, resources);
    if (su > 0) {
      r.weighted_average = average_job_size(g, resources, true, false, kraken_factor);
      r.weighted_effective_average = average_job_size(g, resources, true, true, kraken_factor);
    }
    out.push_back(r);
  }
  return out;
}

std::vector<SingleNodeRow> single_node_serial_fractions(std::span<const JobRecord> jobs,
                                                        const ResourceMap& resources,
                                                        bool exclude_osg, Period period) {
  struct Acc {
    std::size_t jobs = 0, single = 0;
    double su = 0, su_single = 0, su_serial = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& j : jobs) {
    if (exclude_osg && is_osg(j, resources)) continue;
    auto& a = acc[period_label(j.end_time, period)];
    double su = job_xd_su(j, resources);
    ++a.jobs;
    a.su += su;
    if (j.nodes == 1) {
      ++a.single;
      a.su_single += su;
    }
    if (j.cores == 1) a.su_serial += su;
  }
  std::vector<SingleNodeRow> out;
  for (const auto& [p, a] : acc) {
    SingleNodeRow r;
    r.period = p;
    r.jobs = a.jobs;
    r.pct_jobs_single_node = 100.0 * static_cast<double>(a.single) / static_cast<double>(a.jobs);
    if (a.su > 0) {
      r.pct_xd_su_single_node = 100.0 * a.su_single / a.su;
      r.pct_xd_su_serial = 100.0 * a.su_serial / a.su;
    }
    out.push_back(r);
  }
  return out;
}

Table to_table(std::span<const AverageSizeRow> rows) {
  Table t({"period", "jobs", "average_cores", "effective_average_cores", "xd_su_weighted_cores",
           "xd_su_weighted_effective_cores"});
  for (const auto& r : rows)
    t.add_row({r.period, static_cast<std::int64_t>(r.jobs), r.average, r.effective_average,
               r.weighted_average, r.weighted_effective_average});
  return t;
}

Table to_table(std::span<const SingleNodeRow> rows) {
  Table t({"period", "jobs", "pct_jobs_single_node", "pct_xd_su_single_node", "pct_xd_su_serial"});
  for (const auto& r : rows)
    t.add_row({r.period, static_cast<std::int64_t>(r.jobs), r.pct_jobs_single_node,
               r.pct_xd_su_single_node, r.pct_xd_su_serial});
  return t;
}

}  // namespace hpcwl::metrics
