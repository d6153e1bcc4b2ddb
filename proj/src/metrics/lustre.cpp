#include "hpcwl/metrics/lustre.hpp"

#include <map>

namespace hpcwl::metrics {

std::optional<LustreNormalize> parse_lustre_normalize(std::string_view s) {
  if (s == "per_job") return LustreNormalize::per_job;
  if (s == "per_node_hour") return LustreNormalize::per_node_hour;
  return std::nullopt;
}

LustreDistributions lustre_stats(std::span<const JobView> views, const ResourceMap& resources,
                                 LustreNormalize normalize, WeightKind weight) {
  LustreDistributions d{Histogram1D::make(log_edges(0, 9, 4), weight),
                        Histogram1D::make(log_edges(0, 16, 4), weight),
                        Histogram1D::make(log_edges(0, 16, 4), weight),
                        Histogram1D::make(log_edges(-3, 11, 4), weight),
                        Histogram1D::make(log_edges(-3, 11, 4), weight)};
  for (const auto& v : views) {
    const auto& job = *v.job;
    double w = job_weight(job, weight, resources);
    const auto* s = v.summary;
    double seconds = static_cast<double>(job.wall_seconds());
    double scale = 1.0;
    double rate_scale = 1.0;
    if (normalize == LustreNormalize::per_node_hour) {
      scale = job.node_hours() > 0 ? 1.0 / job.node_hours() : 0.0;
      rate_scale = 1.0 / static_cast<double>(job.nodes);
    }
    auto put = [&](Histogram1D& h, const std::optional<double>& v, double factor) {
      if (v && factor > 0)
        h.add(*v * factor, w);
      else
        h.add_absent(w);
    };
    put(d.opens, s ? s->file_opens : std::nullopt, scale);
    put(d.read_bytes, s ? s->lustre_rx : std::nullopt, scale);
    put(d.write_bytes, s ? s->lustre_tx : std::nullopt, scale);
    double per_sec = seconds > 0 ? rate_scale / seconds : 0.0;
    put(d.read_rate, s ? s->lustre_rx : std::nullopt, per_sec);
    put(d.write_rate, s ? s->lustre_tx : std::nullopt, per_sec);
  }
  return d;
}

std::vector<DailyIo> lustre_daily(std::span<const JobView> views) {
  std::map<std::pair<std::string, std::string>, DailyIo> acc;
  for (const auto& v : views) {
    if (!v.summary || !v.summary->lustre_rx || !v.summary->lustre_tx) continue;
    auto day = Date::from_unix(v.job->end_time).to_string();
    auto& row = acc[{day, v.job->resource}];
    row.day = day;
    row.resource = v.job->resource;
    row.read_total += *v.summary->lustre_rx;
    row.write_total += *v.summary->lustre_tx;
    ++row.jobs;
  }
  std::vector<DailyIo> out;
  for (auto& [k, r] : acc) out.push_back(std::move(r));
  return out;
}

Table to_table(const LustreDistributions& d) {
  Table t({"metric", "bin", "lower", "upper", "weight"});
  auto append = [&](const char* name, const Histogram1D& h) {
    for (const auto& row : h.to_table().rows) {
      std::vector<Cell> r{std::string(name)};
      r.insert(r.end(), row.begin(), row.end());
      t.add_row(std::move(r));
    }
  };
  append("opens", d.opens);
  append("read_bytes", d.read_bytes);
  append("write_bytes", d.write_bytes);
  append("read_rate", d.read_rate);
  append("write_rate", d.write_rate);
  return t;
}

Table to_table(std::span<const DailyIo> rows) {
  Table t({"day", "resource", "read_total", "write_total", "jobs"});
  for (const auto& r : rows)
    t.add_row({r.day, r.resource, r.read_total, r.write_total, static_cast<std::int64_t>(r.jobs)});
  return t;
}

}  // namespace hpcwl::metrics
