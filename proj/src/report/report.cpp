#include "hpcwl/report/report.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "hpcwl/backlog/backlog.hpp"
#include "hpcwl/core/errors.hpp"
#include "hpcwl/ingest/loaders.hpp"
#include "hpcwl/ingest/validate.hpp"
#include "hpcwl/metrics/allocation.hpp"
#include "hpcwl/metrics/apps.hpp"
#include "hpcwl/metrics/concurrency.hpp"
#include "hpcwl/metrics/depth.hpp"
#include "hpcwl/metrics/jobsize.hpp"
#include "hpcwl/metrics/lustre.hpp"
#include "hpcwl/metrics/memory.hpp"
#include "hpcwl/metrics/rollup.hpp"
#include "hpcwl/perf/summarize.hpp"
#include "hpcwl/report/digest.hpp"
#include "hpcwl/stats/exit_codes.hpp"
#include "hpcwl/stats/logistic.hpp"
#include "hpcwl/stats/lomb_scargle.hpp"

namespace hpcwl::report {

using metrics::JobFilter;
using metrics::JobView;

Dataset load_dataset(const InputPaths& inputs) {
  if (inputs.jobs.empty()) throw SchemaError(0, "inputs.jobs", "missing");
  if (inputs.resources.empty()) throw SchemaError(0, "inputs.resources", "missing");
  auto resources = load_resources(inputs.resources);
  auto jobs = load_jobs(inputs.jobs, detect_format(inputs.jobs));
  Loaded<AllocationRecord> allocs;
  if (!inputs.allocations.empty())
    allocs = load_allocations(inputs.allocations, detect_format(inputs.allocations));
  auto ds = Dataset::assemble(std::move(jobs), std::move(allocs), std::move(resources));
  return ds.with_flags(validate(ds));
}

SummaryMap summarize_all(std::span<const JobRecord> jobs, const ResourceMap& resources,
                         const perf::ArchiveStore& archives,
                         const perf::SummarizeOptions& options) {
  SummaryMap out;
  for (const auto& job : jobs) {
    if (!archives.has_nodes(job.job_id)) continue;
    auto it = resources.find(job.resource);
    if (it == resources.end()) continue;
    auto s = perf::summarize_job(job, archives.job_archive(job), it->second.cores_per_node, options);
    if (s) out.emplace(job.job_id, std::move(*s));
  }
  return out;
}

Workspace load_workspace(const InputPaths& inputs) {
  Workspace ws;
  ws.dataset = std::make_shared<const Dataset>(load_dataset(inputs));
  ws.population = per_job_population(*ws.dataset);
  if (inputs.app_patterns) ws.app_db = appident::AppDatabase::load(*inputs.app_patterns);
  if (inputs.ignore) ws.ignore = appident::load_ignore_list(*inputs.ignore);
  if (inputs.community_users) ws.community = metrics::load_community_users(*inputs.community_users);
  if (inputs.emails) ws.emails = metrics::load_email_map(*inputs.emails);
  if (inputs.population) ws.population_by_state = metrics::load_state_table(*inputs.population);
  if (inputs.tech_index) ws.tech_index = metrics::load_state_table(*inputs.tech_index);
  if (!inputs.archives.empty()) {
    perf::ArchiveStore store;
    for (const auto& a : inputs.archives) store.load(a);
    perf::SummarizeOptions opts;
    if (ws.app_db) {
      opts.app_db = &*ws.app_db;
      opts.ignore = &ws.ignore;
    }
    ws.summaries = summarize_all(ws.population, ws.dataset->resources(), store, opts);
  }
  return ws;
}

metrics::JobFilter report_filter(const ReportSpec& spec) {
  JobFilter f;
  f.exclude_osg = spec.exclude_osg;
  f.resources = spec.resources;
  f.queues = spec.queues;
  if (spec.start) f.from = spec.start->to_unix();
  if (spec.end) f.to = spec.end->to_unix();
  return f;
}

namespace {

// Typed access to an analysis' parameters; unknown keys are rejected by finish().
class Params {
 public:
  explicit Params(const AnalysisSpec& a) : a_(a) {}

  std::optional<std::string> opt(const std::string& key) {
    used_.insert(key);
    auto it = a_.params.find(key);
    if (it == a_.params.end() || it->second.empty()) return std::nullopt;
    return it->second;
  }

  std::string str(const std::string& key, const std::string& def) { return opt(key).value_or(def); }

  double num(const std::string& key, double def) {
    auto v = opt(key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      double d = std::stod(*v, &pos);
      if (pos == v->size()) return d;
    } catch (const std::exception&) {
    }
    throw bad(key, "expected a number, got '" + *v + "'");
  }

  bool flag(const std::string& key, bool def) {
    auto v = opt(key);
    if (!v) return def;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw bad(key, "expected true or false, got '" + *v + "'");
  }

  template <typename T, typename Parse>
  T choice(const std::string& key, Parse parse, T def) {
    auto v = opt(key);
    if (!v) return def;
    auto r = parse(*v);
    if (!r) throw bad(key, "unrecognized value '" + *v + "'");
    return *r;
  }

  Date date(const std::string& key, Date def) {
    auto v = opt(key);
    if (!v) return def;
    auto d = Date::try_parse(*v);
    if (!d) throw bad(key, "not an ISO-8601 date: '" + *v + "'");
    return *d;
  }

  void finish() const {
    for (const auto& [k, v] : a_.params)
      if (!used_.contains(k)) throw bad(k, "unknown parameter for op " + a_.op);
  }

 private:
  SchemaError bad(const std::string& key, const std::string& detail) const {
    return SchemaError(0, "analysis." + a_.id + "." + key, detail);
  }

  const AnalysisSpec& a_;
  std::set<std::string> used_;
};

std::optional<Period> parse_period_opt(std::string_view s) {
  if (s == "quarter") return Period::quarter;
  if (s == "year") return Period::year;
  return std::nullopt;
}

// Rows of `part` appended to `out` behind a leading key column.
void append_keyed(Table& out, const std::string& key_column, const std::string& key,
                  const Table& part) {
  if (out.columns.empty()) {
    out.columns.push_back(key_column);
    out.columns.insert(out.columns.end(), part.columns.begin(), part.columns.end());
  }
  for (const auto& row : part.rows) {
    std::vector<Cell> r;
    r.reserve(row.size() + 1);
    r.emplace_back(key);
    r.insert(r.end(), row.begin(), row.end());
    out.rows.push_back(std::move(r));
  }
}

struct Context {
  const Workspace& ws;
  JobFilter filter;
  Params& params;

  const ResourceMap& resources() const { return ws.dataset->resources(); }

  // All jobs, including aggregated-accounting rows: used for usage totals.
  std::vector<JobRecord> all_jobs() const {
    return metrics::filter_jobs(ws.dataset->jobs(), resources(), filter);
  }
  // Jobs eligible for per-job metrics.
  std::vector<JobRecord> per_job() const {
    return metrics::filter_jobs(ws.population, resources(), filter);
  }

  std::vector<JobView> views(const std::vector<JobRecord>& jobs) const {
    std::vector<JobView> out;
    out.reserve(jobs.size());
    for (const auto& j : jobs) {
      auto it = ws.summaries.find(j.job_id);
      out.push_back({&j, it == ws.summaries.end() ? nullptr : &it->second});
    }
    return out;
  }

  std::vector<AllocationRecord> allocations() const {
    std::vector<AllocationRecord> out;
    for (const auto& a : ws.dataset->allocations())
      if (filter.resources.empty() ||
          std::find(filter.resources.begin(), filter.resources.end(), a.resource) !=
              filter.resources.end())
        out.push_back(a);
    return out;
  }

  std::vector<std::string> resource_names(const std::vector<JobRecord>& jobs) const {
    std::set<std::string> names;
    for (const auto& j : jobs) names.insert(j.resource);
    return {names.begin(), names.end()};
  }
};

Table joint_ratio_table(const std::string& key_column,
                        const std::vector<std::pair<std::string, metrics::DepthProfile>>& groups) {
  Table t({key_column, "by", "projects", "joint_ratio", "depth_at_ratio", "projects_at_ratio",
           "usage_at_ratio", "jobs_at_ratio"});
  for (const auto& [key, profile] : groups) {
    bool any = std::any_of(profile.projects.begin(), profile.projects.end(),
                           [](const metrics::ProjectDepth& p) { return p.usage > 0; });
    if (!any) continue;
    auto r = metrics::joint_ratio(profile);
    t.add_row({key, std::string(metrics::to_string(profile.by)),
               static_cast<std::int64_t>(profile.projects.size()), r.label(), r.depth_at_ratio,
               static_cast<std::int64_t>(r.projects_at_ratio), r.usage_at_ratio, r.jobs_at_ratio});
  }
  return t;
}

stats::Periodogram submission_periodogram(Context& c, std::vector<stats::Peak>* peaks) {
  auto resource = c.params.opt("resource");
  auto bin_seconds = static_cast<UnixSeconds>(c.params.num("bin_seconds", 3600));
  double fmin = c.params.num("fmin", stats::kMinFrequency);
  double fmax = c.params.num("fmax", stats::kMaxFrequency);
  std::size_t max_peaks = peaks ? static_cast<std::size_t>(c.params.num("max_peaks", 10)) : 0;
  if (bin_seconds < 1) throw SchemaError(0, "bin_seconds", "must be >= 1");

  std::vector<UnixSeconds> events;
  for (const auto& j : c.per_job())
    if (!resource || j.resource == *resource) events.push_back(j.submit_time);
  auto series = stats::bin_events(events, bin_seconds);
  double span = series.t.empty() ? 0.0 : series.t.back() - series.t.front();
  std::vector<double> grid;
  for (double f : stats::default_frequency_grid(span))
    if (f >= fmin && f <= fmax) grid.push_back(f);
  auto p = stats::lomb_scargle(series.t, series.y, grid);
  if (peaks) *peaks = stats::find_peaks(p, max_peaks);
  return p;
}

using Handler = std::function<AnalysisOutput(Context&)>;

AnalysisOutput table_only(Table t) { return {std::move(t), std::nullopt}; }

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> kHandlers = {
      {"allocation_summary",
       [](Context& c) {
         auto allocs = c.allocations();
         return table_only(metrics::to_table(metrics::allocation_size_summary(allocs)));
       }},
      {"allocation_utilization",
       [](Context& c) {
         auto by = c.params.choice("group_by", metrics::parse_alloc_group_by,
                                   metrics::AllocGroupBy::resource);
         auto allocs = c.allocations();
         return table_only(metrics::to_table(metrics::allocation_utilization(allocs, by)));
       }},
      {"usage_rollup",
       [](Context& c) {
         auto dim = c.params.choice("dimension", metrics::parse_dimension,
                                    metrics::Dimension::parent_science);
         auto weight = c.params.choice("weight", metrics::parse_weight_kind, metrics::WeightKind::xd_su);
         auto period = c.params.choice("period", parse_period_opt, Period::quarter);
         return table_only(metrics::to_table(metrics::usage_rollup(
             c.ws.dataset->jobs(), c.resources(), dim, weight, period, c.filter)));
       }},
      {"job_size_distribution",
       [](Context& c) {
         auto weight = c.params.choice("weight", metrics::parse_weight_kind, metrics::WeightKind::xd_su);
         bool by_nodes = c.params.str("by", "cores") == "nodes";
         auto jobs = c.per_job();
         return table_only(
             metrics::job_size_distribution(jobs, c.resources(), weight, {}, by_nodes).to_table());
       }},
      {"average_job_size",
       [](Context& c) {
         auto period = c.params.choice("period", parse_period_opt, Period::year);
         double kraken = c.params.num("kraken_factor", metrics::kDefaultKrakenFactor);
         auto jobs = c.per_job();
         return table_only(metrics::to_table(
             metrics::average_job_size_series(jobs, c.resources(), period, kraken)));
       }},
      {"single_node_fractions",
       [](Context& c) {
         auto period = c.params.choice("period", parse_period_opt, Period::year);
         bool exclude = c.params.flag("exclude_osg", true);
         auto jobs = c.per_job();
         return table_only(metrics::to_table(
             metrics::single_node_serial_fractions(jobs, c.resources(), exclude, period)));
       }},
      {"depth_by_year",
       [](Context& c) {
         auto by = c.params.choice("by", metrics::parse_depth_by, metrics::DepthBy::cores);
         auto jobs = c.per_job();
         std::set<int> years;
         for (const auto& j : jobs) years.insert(Date::from_unix(j.end_time).year());
         std::vector<std::pair<std::string, metrics::DepthProfile>> groups;
         for (int y : years) groups.emplace_back(std::to_string(y), metrics::depth_profile(jobs, by, y));
         return table_only(joint_ratio_table("year", groups));
       }},
      {"depth_by_resource",
       [](Context& c) {
         auto by = c.params.choice("by", metrics::parse_depth_by, metrics::DepthBy::cores);
         auto jobs = c.per_job();
         std::vector<std::pair<std::string, metrics::DepthProfile>> groups;
         for (const auto& r : c.resource_names(jobs))
           groups.emplace_back(r, metrics::depth_profile(backlog::jobs_on(jobs, r), by));
         return table_only(joint_ratio_table("resource", groups));
       }},
      {"width_curves",
       [](Context& c) {
         auto by = c.params.choice("by", metrics::parse_depth_by, metrics::DepthBy::cores);
         auto jobs = c.per_job();
         return table_only(metrics::to_table(metrics::width_curves(metrics::depth_profile(jobs, by))));
       }},
      {"memory_histogram",
       [](Context& c) {
         auto mode = c.params.choice("mode", metrics::parse_memory_mode,
                                     metrics::MemoryMode::per_core_avg);
         auto weight = c.params.choice("weight", metrics::parse_weight_kind,
                                       metrics::WeightKind::core_hours);
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::memory_histogram(views, c.resources(), mode, weight).to_table());
       }},
      {"memory_2d",
       [](Context& c) {
         auto x = c.params.choice("x", metrics::parse_mem_x_axis, metrics::MemXAxis::cpu_user_fraction);
         auto y = c.params.choice("y", metrics::parse_mem_y_axis, metrics::MemYAxis::fraction_mem_used);
         auto weight = c.params.choice("weight", metrics::parse_weight_kind,
                                       metrics::WeightKind::core_hours);
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::memory_2d(views, c.resources(), x, y, weight).to_table());
       }},
      {"large_memory",
       [](Context& c) {
         auto group = c.params.choice("group", metrics::parse_large_mem_group,
                                      metrics::LargeMemGroup::parent_science);
         double normal = c.params.num("normal_threshold", 0.80);
         double large = c.params.num("large_threshold", 0.10);
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::to_table(
             metrics::large_memory_breakdown(views, c.resources(), group, normal, large)));
       }},
      {"lustre_distributions",
       [](Context& c) {
         auto norm = c.params.choice("normalize", metrics::parse_lustre_normalize,
                                     metrics::LustreNormalize::per_job);
         auto weight = c.params.choice("weight", metrics::parse_weight_kind, metrics::WeightKind::count);
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::to_table(metrics::lustre_stats(views, c.resources(), norm, weight)));
       }},
      {"lustre_daily",
       [](Context& c) {
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::to_table(metrics::lustre_daily(views)));
       }},
      {"app_usage",
       [](Context& c) {
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::to_table(metrics::app_usage(views, c.resources())));
       }},
      {"runnable_threads",
       [](Context& c) {
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::runnable_threads_histogram(views, c.resources()).to_table());
       }},
      {"launch_types",
       [](Context& c) {
         auto period = c.params.choice("period", parse_period_opt, Period::quarter);
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::to_table(metrics::launch_type_series(views, c.resources(), period)));
       }},
      {"process_bands",
       [](Context& c) {
         double low = c.params.num("low", 32);
         double high = c.params.num("high", 68);
         auto jobs = c.per_job();
         auto views = c.views(jobs);
         return table_only(metrics::to_table(metrics::process_bands(views, c.resources(), low, high)));
       }},
      {"exit_codes",
       [](Context& c) {
         bool by_resource = c.params.flag("by_resource", true);
         auto jobs = c.all_jobs();
         return table_only(stats::to_table(stats::exit_code_table(jobs, by_resource)));
       }},
      {"fit_failures",
       [](Context& c) {
         auto model = c.params.choice("model", stats::parse_covariate_model,
                                      stats::CovariateModel::nodes_linear);
         auto label = c.params.choice("label", stats::parse_failure_label, stats::FailureLabel::node_fail);
         auto resource = c.params.opt("resource");
         auto jobs = c.per_job();
         if (resource) jobs = backlog::jobs_on(jobs, *resource);
         auto fit = stats::fit_node_fail(jobs, model, label);
         auto doc = stats::to_json(fit);
         Table t({"term", "estimate", "std_error", "z", "p_value"});
         const char* terms[] = {"intercept", "slope"};
         for (int i = 0; i < 2; ++i)
           t.add_row({std::string(terms[i]), fit.beta[i], fit.se[i], fit.z[i], fit.p_value[i]});
         return AnalysisOutput{std::move(t), std::move(doc)};
       }},
      {"gateway_usage",
       [](Context& c) {
         auto mode = c.params.choice("mode", metrics::parse_gateway_mode,
                                     metrics::GatewayMode::community_user);
         auto period_name = c.params.str("period", "none");
         std::optional<Period> period;
         if (period_name != "none") {
           period = parse_period_opt(period_name);
           if (!period) throw SchemaError(0, "period", "expected quarter, year or none");
         }
         auto jobs = c.all_jobs();
         return table_only(metrics::to_table(metrics::gateway_usage(
             jobs, c.ws.dataset->allocations(), c.resources(), c.ws.community, mode, period)));
       }},
      {"gateway_census",
       [](Context& c) {
         auto period = c.params.choice("period", parse_period_opt, Period::year);
         auto reliable = c.params.date("reliability_date", metrics::kGatewayReliabilityDate);
         auto jobs = c.all_jobs();
         return table_only(
             metrics::to_table(metrics::gateway_census(jobs, c.ws.community, period, reliable)));
       }},
      {"gateway_conversion",
       [](Context& c) {
         auto min_jobs = static_cast<std::size_t>(c.params.num("min_xsede_jobs", 10));
         auto jobs = c.all_jobs();
         return table_only(metrics::to_table(
             metrics::gateway_conversion(jobs, c.ws.community, c.ws.emails, min_jobs)));
       }},
      {"geo",
       [](Context& c) {
         auto weight = c.params.choice("weight", metrics::parse_weight_kind, metrics::WeightKind::xd_su);
         auto jobs = c.all_jobs();
         auto usage = metrics::usage_by_state(jobs, c.resources(), weight);
         return table_only(metrics::to_table(
             metrics::geo_normalize(usage, c.ws.population_by_state, c.ws.tech_index)));
       }},
      {"backlog_series",
       [](Context& c) {
         auto sampling = c.params.choice("sampling", backlog::parse_sampling, backlog::Sampling::daily);
         auto resource = c.params.opt("resource");
         auto jobs = c.per_job();
         Table out;
         for (const auto& r : c.resource_names(jobs)) {
           if (resource && r != *resource) continue;
           auto on = backlog::jobs_on(jobs, r);
           auto series = backlog::backlog_series(on, sampling, c.resources().at(r).nodes);
           append_keyed(out, "resource", r, backlog::to_table(series));
         }
         if (out.columns.empty()) {
           std::vector<backlog::BacklogPoint> none;
           append_keyed(out, "resource", "", backlog::to_table(none));
         }
         return table_only(std::move(out));
       }},
      {"wait_stats",
       [](Context& c) {
         auto jobs = c.per_job();
         return table_only(backlog::to_table(backlog::wait_stats_by_resource(jobs)));
       }},
      {"capacity",
       [](Context& c) {
         bool time_weighted = c.params.flag("time_weighted", false);
         auto jobs = c.per_job();
         std::vector<backlog::CapacityRow> rows;
         for (const auto& r : c.resource_names(jobs)) {
           const auto& spec = c.resources().at(r);
           auto on = backlog::jobs_on(jobs, r);
           rows.push_back({r, spec.nodes, spec.total_cores(),
                           backlog::capacity_for_percentile(on, spec, 0.95, time_weighted),
                           backlog::capacity_for_percentile(on, spec, 0.99, time_weighted)});
         }
         return table_only(backlog::to_table(rows));
       }},
      {"user_queue_depth",
       [](Context& c) {
         std::vector<std::string> community;
         for (const auto& [account, gateway] : c.ws.community) community.push_back(account);
         auto jobs = c.per_job();
         return table_only(backlog::to_table(backlog::user_queue_depth(jobs, community)));
       }},
      {"periodogram",
       [](Context& c) { return table_only(stats::to_table(submission_periodogram(c, nullptr))); }},
      {"periodogram_peaks",
       [](Context& c) {
         std::vector<stats::Peak> peaks;
         submission_periodogram(c, &peaks);
         return table_only(stats::to_table(peaks));
       }},
      {"quality_flags",
       [](Context& c) {
         Table t({"kind", "index", "key", "issue", "detail"});
         for (const auto& f : c.ws.dataset->quality_flags())
           t.add_row({std::string(to_string(f.locator.kind)),
                      static_cast<std::int64_t>(f.locator.index), f.locator.key, f.issue, f.detail});
         return table_only(std::move(t));
       }},
      {"rejections",
       [](Context& c) {
         Table t({"source", "row", "field", "code", "message"});
         for (const auto& r : c.ws.dataset->job_rejections())
           t.add_row({std::string("jobs"), static_cast<std::int64_t>(r.row), r.field, r.code, r.message});
         for (const auto& r : c.ws.dataset->allocation_rejections())
           t.add_row({std::string("allocations"), static_cast<std::int64_t>(r.row), r.field, r.code,
                      r.message});
         return table_only(std::move(t));
       }},
  };
  return kHandlers;
}

std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError(path.string(), "cannot write");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IOError(path.string(), "write failed");
}

}  // namespace

AnalysisOutput run_analysis(const Workspace& ws, const AnalysisSpec& analysis,
                            const metrics::JobFilter& filter) {
  const auto& h = handlers();
  auto it = h.find(analysis.op);
  if (it == h.end()) throw UnknownAnalysis(analysis.op);
  Params params(analysis);
  Context ctx{ws, filter, params};
  if (analysis.op != "single_node_fractions")
    ctx.filter.exclude_osg = params.flag("exclude_osg", filter.exclude_osg);
  auto out = it->second(ctx);
  params.finish();
  return out;
}

std::vector<std::string> known_analyses() {
  std::vector<std::string> out;
  for (const auto& [name, h] : handlers()) out.push_back(name);
  return out;
}

nlohmann::json Manifest::to_json() const {
  auto files_json = nlohmann::json::array();
  for (const auto& f : files)
    files_json.push_back({{"path", f.path}, {"rows", f.rows}, {"sha256", f.sha256}});
  return {{"name", name}, {"files", std::move(files_json)}};
}

Manifest Manifest::from_json(const nlohmann::json& j) {
  Manifest m;
  try {
    m.name = j.at("name").get<std::string>();
    for (const auto& f : j.at("files"))
      m.files.push_back({f.at("path").get<std::string>(), f.at("rows").get<std::size_t>(),
                         f.at("sha256").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(0, "manifest", e.what());
  }
  return m;
}

Manifest run_report(const Workspace& ws, const ReportSpec& spec) {
  check_spec(spec);
  std::filesystem::create_directories(spec.output_dir);
  auto filter = report_filter(spec);

  Manifest manifest;
  manifest.name = spec.name;
  for (const auto& a : spec.analyses) {
    AnalysisOutput out;
    try {
      out = run_analysis(ws, a, filter);
    } catch (const UnknownAnalysis&) {
      throw;
    } catch (const Error& e) {
      throw AnalysisError(a.id, e);
    } catch (const std::exception& e) {
      throw AnalysisError(a.id, e.what());
    }

    auto emit = [&](const std::string& file, const std::string& content, std::size_t rows) {
      write_file(spec.output_dir / file, content);
      manifest.files.push_back({file, rows, sha256_hex(content)});
    };
    if (out.document) {
      std::size_t rows = out.document->is_array() ? out.document->size() : 1;
      emit(a.id + ".json", render_json(*out.document), rows);
      continue;
    }
    for (const auto& fmt : spec.formats) {
      if (fmt == "csv") emit(a.id + ".csv", out.table.to_csv(), out.table.rows.size());
      else emit(a.id + ".json", render_json(out.table.to_json()), out.table.rows.size());
    }
  }
  std::sort(manifest.files.begin(), manifest.files.end(),
            [](const ManifestEntry& x, const ManifestEntry& y) { return x.path < y.path; });
  write_file(spec.output_dir / kManifestFile, render_json(manifest.to_json()));
  return manifest;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& output_dir) {
  std::ifstream in(output_dir / kManifestFile);
  if (!in) throw IOError((output_dir / kManifestFile).string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(0, "manifest", e.what());
  }
  std::vector<std::string> bad;
  for (const auto& f : Manifest::from_json(j).files) {
    auto path = output_dir / f.path;
    if (!std::filesystem::exists(path) || sha256_file(path) != f.sha256) bad.push_back(f.path);
  }
  return bad;
}

ReportSpec paper_bundle_spec() {
  ReportSpec s;
  s.name = "paper-bundle";
  s.output_dir = "paper_bundle";
  auto add = [&](std::string id, std::string op, std::map<std::string, std::string> params = {}) {
    s.analyses.push_back({std::move(id), std::move(op), std::move(params)});
  };
  add("allocation_summary", "allocation_summary");
  add("allocation_by_resource", "allocation_utilization", {{"group_by", "resource"}});
  add("allocation_by_type", "allocation_utilization", {{"group_by", "alloc_type"}});
  add("usage_by_parent_science", "usage_rollup",
      {{"dimension", "parent_science"}, {"weight", "xd_su"}, {"period", "quarter"}, {"exclude_osg", "true"}});
  add("usage_by_resource_type", "usage_rollup",
      {{"dimension", "rtype"}, {"weight", "xd_su"}, {"period", "quarter"}});
  add("usage_by_directorate", "usage_rollup",
      {{"dimension", "directorate"}, {"weight", "xd_su"}, {"period", "year"}});
  add("usage_by_user_status", "usage_rollup",
      {{"dimension", "nsf_user_status"}, {"weight", "xd_su"}, {"period", "year"}});
  add("job_sizes", "job_size_distribution", {{"weight", "xd_su"}, {"exclude_osg", "true"}});
  add("average_job_size", "average_job_size", {{"period", "quarter"}});
  add("single_node_fractions", "single_node_fractions", {{"period", "year"}});
  add("depth_by_year", "depth_by_year", {{"by", "cores"}});
  add("depth_by_resource", "depth_by_resource", {{"by", "nodes"}});
  add("width_curves", "width_curves", {{"by", "cores"}});
  add("memory_per_core_avg", "memory_histogram", {{"mode", "per_core_avg"}});
  add("memory_per_core_max", "memory_histogram", {{"mode", "per_core_max"}});
  add("memory_vs_cpu_user", "memory_2d", {{"x", "cpu_user_fraction"}, {"y", "fraction_mem_used"}});
  add("peak_memory_vs_nodes", "memory_2d", {{"x", "nodes"}, {"y", "total_peak_mem"}});
  add("large_memory_by_parent_science", "large_memory", {{"group", "parent_science"}});
  add("large_memory_by_application", "large_memory", {{"group", "application"}});
  add("lustre_per_job", "lustre_distributions", {{"normalize", "per_job"}, {"weight", "count"}});
  add("lustre_per_node_hour", "lustre_distributions",
      {{"normalize", "per_node_hour"}, {"weight", "node_hours"}});
  add("lustre_daily", "lustre_daily");
  add("application_usage", "app_usage");
  add("runnable_threads", "runnable_threads");
  add("launch_types", "launch_types", {{"period", "quarter"}});
  add("process_bands", "process_bands");
  add("exit_codes", "exit_codes", {{"by_resource", "true"}});
  add("node_fail_vs_nodes", "fit_failures", {{"model", "nodes_linear"}, {"label", "node_fail"}});
  add("failures_vs_walltime_pow_nodes", "fit_failures",
      {{"model", "walltime_pow_nodes"}, {"label", "node_fail_or_failed"}});
  add("gateway_usage_community_user", "gateway_usage", {{"mode", "community_user"}, {"period", "year"}});
  add("gateway_usage_associated_allocation", "gateway_usage",
      {{"mode", "associated_allocation"}, {"period", "year"}});
  add("gateway_usage_tagged", "gateway_usage", {{"mode", "gateway_tagged"}});
  add("user_census", "gateway_census", {{"period", "year"}});
  add("gateway_conversion", "gateway_conversion", {{"min_xsede_jobs", "10"}});
  add("geographic_usage", "geo", {{"weight", "xd_su"}});
  add("backlog_daily", "backlog_series", {{"sampling", "daily"}});
  add("wait_times", "wait_stats");
  add("capacity", "capacity");
  add("user_queue_depth", "user_queue_depth");
  add("submission_periodogram", "periodogram", {{"fmax", "1.5"}});
  add("submission_peaks", "periodogram_peaks", {{"fmax", "1.5"}, {"max_peaks", "10"}});
  add("quality_flags", "quality_flags");
  return s;
}

}  // namespace hpcwl::report
