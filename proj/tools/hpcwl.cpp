// hpcwl: command-line front end. Exit codes: 0 success, 1 analysis error, 2 input error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hpcwl/appident/appident.hpp"
#include "hpcwl/core/errors.hpp"
#include "hpcwl/ingest/loaders.hpp"
#include "hpcwl/perf/summarize.hpp"
#include "hpcwl/report/config.hpp"
#include "hpcwl/report/report.hpp"

namespace {

using namespace hpcwl;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kAnalysisError = 1;
constexpr int kInputError = 2;

struct Common {
  std::string config;
  std::string jobs, allocations, resources, patterns, ignore, community, emails, population, tech;
  std::vector<std::string> archives;
  std::string start, end;
  std::vector<std::string> only_resources;
  bool exclude_osg = false;
  std::string format = "csv";
  std::string out;
};

void add_inputs(CLI::App* cmd, Common& c) {
  cmd->add_option("--jobs", c.jobs, "Job records (.jsonl or .csv)");
  cmd->add_option("--allocations", c.allocations, "Allocation records (.jsonl or .csv)");
  cmd->add_option("--resources", c.resources, "Resource description JSON");
  cmd->add_option("--archives", c.archives, "Node archive JSONL files");
  cmd->add_option("--patterns", c.patterns, "Application pattern database");
  cmd->add_option("--ignore", c.ignore, "Process ignore list");
  cmd->add_option("--community-users", c.community, "Gateway community account map");
  cmd->add_option("--emails", c.emails, "Identity to email map");
  cmd->add_option("--population", c.population, "State population CSV");
  cmd->add_option("--tech-index", c.tech, "State technology index CSV");
}

void add_filters(CLI::App* cmd, Common& c) {
  cmd->add_option("--start", c.start, "First end date included (YYYY-MM-DD)");
  cmd->add_option("--end", c.end, "End date excluded (YYYY-MM-DD)");
  cmd->add_option("--resource", c.only_resources, "Restrict to these resources");
  cmd->add_flag("--exclude-osg", c.exclude_osg, "Leave out OSG jobs");
}

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--out", c.out, "Output file (default stdout)");
}

report::Config load_config(const Common& c) {
  report::Config cfg;
  std::optional<fs::path> path;
  if (!c.config.empty()) path = c.config;
  else path = report::default_config_path();
  if (path) cfg = report::load_config(*path);

  auto& in = cfg.inputs;
  if (!c.jobs.empty()) in.jobs = c.jobs;
  if (!c.allocations.empty()) in.allocations = c.allocations;
  if (!c.resources.empty()) in.resources = c.resources;
  if (!c.archives.empty()) in.archives.assign(c.archives.begin(), c.archives.end());
  if (!c.patterns.empty()) in.app_patterns = c.patterns;
  if (!c.ignore.empty()) in.ignore = c.ignore;
  if (!c.community.empty()) in.community_users = c.community;
  if (!c.emails.empty()) in.emails = c.emails;
  if (!c.population.empty()) in.population = c.population;
  if (!c.tech.empty()) in.tech_index = c.tech;

  auto& r = cfg.report;
  auto date = [](const std::string& field, const std::string& v) {
    auto d = Date::try_parse(v);
    if (!d) throw SchemaError(0, field, "not an ISO-8601 date: '" + v + "'");
    return *d;
  };
  if (!c.start.empty()) r.start = date("--start", c.start);
  if (!c.end.empty()) r.end = date("--end", c.end);
  if (!c.only_resources.empty()) r.resources = c.only_resources;
  if (c.exclude_osg) r.exclude_osg = true;
  report::check_spec(r);
  return cfg;
}

// Writes to --out when given, else stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError(c.out, "cannot write");
  out << text;
}

void emit_table(const Common& c, const Table& t) {
  emit(c, c.format == "json" ? t.to_json().dump(2) + "\n" : t.to_csv());
}

void emit_output(const Common& c, const report::AnalysisOutput& out) {
  if (out.document) emit(c, out.document->dump(2) + "\n");
  else emit_table(c, out.table);
}

report::AnalysisOutput analysis(const Common& c, const std::string& op,
                                std::map<std::string, std::string> params) {
  auto cfg = load_config(c);
  auto ws = report::load_workspace(cfg.inputs);
  return report::run_analysis(ws, {op, op, std::move(params)}, report::report_filter(cfg.report));
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& kv : items) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw SchemaError(0, "--param", "expected key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HPC workload characterization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--config", c.config, std::string("Config file (default $") + report::kConfigEnvVar + ")");

  auto* ingest = app.add_subcommand("ingest", "Load inputs and print record counts");
  add_inputs(ingest, c);
  std::string rejections_out;
  ingest->add_option("--rejections", rejections_out, "Write the rejection report (JSONL) here");

  auto* validate = app.add_subcommand("validate", "List data-quality flags");
  add_inputs(validate, c);
  add_output(validate, c);

  auto* summarize = app.add_subcommand("summarize", "Per-job performance summaries as JSONL");
  add_inputs(summarize, c);
  add_filters(summarize, c);
  summarize->add_option("-o,--out", c.out, "Output file (default stdout)");

  auto* classify = app.add_subcommand("classify", "Identify the application of an executable or process list");
  add_inputs(classify, c);
  std::string exe;
  std::vector<std::string> procs;
  classify->add_option("--exe", exe, "Launcher executable path");
  classify->add_option("--proc", procs, "Process observation name:pids (repeatable)");

  auto* metric = app.add_subcommand("metric", "Run one analysis");
  add_inputs(metric, c);
  add_filters(metric, c);
  add_output(metric, c);
  std::string metric_name;
  std::vector<std::string> params;
  metric->add_option("name", metric_name, "Analysis name (see --list)");
  metric->add_option("-p,--param", params, "Analysis parameter key=value (repeatable)");
  bool list_metrics = false;
  metric->add_flag("--list", list_metrics, "List analysis names");

  auto* backlog = app.add_subcommand("backlog", "Queue backlog replay");
  add_inputs(backlog, c);
  add_filters(backlog, c);
  add_output(backlog, c);
  std::string backlog_what = "series";
  std::string sampling = "daily";
  bool time_weighted = false;
  backlog->add_option("--what", backlog_what, "series, wait, capacity or users")
      ->check(CLI::IsMember({"series", "wait", "capacity", "users"}));
  backlog->add_option("--sampling", sampling, "daily or event")->check(CLI::IsMember({"daily", "event"}));
  backlog->add_flag("--time-weighted", time_weighted, "Time-weighted capacity percentiles");

  auto* periodogram = app.add_subcommand("periodogram", "Lomb-Scargle periodogram of job submissions");
  add_inputs(periodogram, c);
  add_filters(periodogram, c);
  add_output(periodogram, c);
  std::string bin_seconds, fmin, fmax, peaks;
  periodogram->add_option("--bin-seconds", bin_seconds, "Bin width in seconds (default 3600)");
  periodogram->add_option("--fmin", fmin, "Lowest frequency, cycles per day");
  periodogram->add_option("--fmax", fmax, "Highest frequency, cycles per day");
  periodogram->add_option("--peaks", peaks, "Print the N strongest peaks instead");

  auto* fit = app.add_subcommand("fit-failures", "Logistic node-failure model (JSON)");
  add_inputs(fit, c);
  add_filters(fit, c);
  fit->add_option("-o,--out", c.out, "Output file (default stdout)");
  std::string model = "nodes_linear", label = "node_fail";
  fit->add_option("--model", model, "nodes_linear or walltime_pow_nodes");
  fit->add_option("--label", label, "node_fail or node_fail_or_failed");

  auto* rep = app.add_subcommand("report", "Run a report and write its manifest");
  add_inputs(rep, c);
  add_filters(rep, c);
  std::string out_dir, verify_dir;
  bool paper_bundle = false;
  rep->add_option("-o,--out-dir", out_dir, "Output directory (overrides the config)");
  rep->add_flag("--paper-bundle", paper_bundle, "Use the built-in paper bundle analyses");
  rep->add_option("--verify", verify_dir, "Check an existing report directory against its manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*ingest) {
      auto cfg = load_config(c);
      auto ds = report::load_dataset(cfg.inputs);
      nlohmann::json j = {{"jobs", ds.jobs().size()},
                          {"allocations", ds.allocations().size()},
                          {"resources", ds.resources().size()},
                          {"job_rejections", ds.job_rejections().size()},
                          {"allocation_rejections", ds.allocation_rejections().size()},
                          {"quality_flags", ds.quality_flags().size()}};
      std::cout << j.dump(2) << "\n";
      if (!rejections_out.empty()) {
        std::ofstream out(rejections_out, std::ios::binary | std::ios::trunc);
        if (!out) throw IOError(rejections_out, "cannot write");
        write_rejection_report(out, ds.job_rejections());
        write_rejection_report(out, ds.allocation_rejections());
      }
    } else if (*validate) {
      emit_output(c, analysis(c, "quality_flags", {}));
    } else if (*summarize) {
      auto cfg = load_config(c);
      auto ws = report::load_workspace(cfg.inputs);
      auto jobs = metrics::filter_jobs(ws.population, ws.dataset->resources(),
                                       report::report_filter(cfg.report));
      std::ostringstream os;
      for (const auto& j : jobs)
        if (auto it = ws.summaries.find(j.job_id); it != ws.summaries.end())
          os << perf::to_json(it->second).dump() << "\n";
      emit(c, os.str());
    } else if (*classify) {
      auto cfg = load_config(c);
      if (!cfg.inputs.app_patterns) throw SchemaError(0, "--patterns", "an application pattern database is required");
      auto db = appident::AppDatabase::load(*cfg.inputs.app_patterns);
      appident::IgnoreList ignore;
      if (cfg.inputs.ignore) ignore = appident::load_ignore_list(*cfg.inputs.ignore);
      std::vector<appident::ProcessObservation> obs;
      for (const auto& p : procs) {
        auto colon = p.rfind(':');
        int pids = 1;
        std::string name = p;
        if (colon != std::string::npos) {
          name = p.substr(0, colon);
          try {
            pids = std::stoi(p.substr(colon + 1));
          } catch (const std::exception&) {
            throw SchemaError(0, "--proc", "expected name:pids, got '" + p + "'");
          }
        }
        if (pids < 1) throw SchemaError(0, "--proc", "pid count must be >= 1");
        obs.push_back({name, pids});
      }
      std::optional<std::string> launcher;
      if (!exe.empty()) launcher = exe;
      std::cout << appident::resolve_job_app(launcher, obs, db, ignore).reported() << "\n";
    } else if (*metric) {
      if (list_metrics) {
        for (const auto& n : report::known_analyses()) std::cout << n << "\n";
        return kOk;
      }
      if (metric_name.empty()) throw SchemaError(0, "name", "an analysis name is required (see --list)");
      emit_output(c, analysis(c, metric_name, parse_params(params)));
    } else if (*backlog) {
      std::map<std::string, std::string> p;
      std::string op;
      if (backlog_what == "series") {
        op = "backlog_series";
        p["sampling"] = sampling;
      } else if (backlog_what == "wait") {
        op = "wait_stats";
      } else if (backlog_what == "capacity") {
        op = "capacity";
        p["time_weighted"] = time_weighted ? "true" : "false";
      } else {
        op = "user_queue_depth";
      }
      emit_output(c, analysis(c, op, p));
    } else if (*periodogram) {
      std::map<std::string, std::string> p;
      if (!bin_seconds.empty()) p["bin_seconds"] = bin_seconds;
      if (!fmin.empty()) p["fmin"] = fmin;
      if (!fmax.empty()) p["fmax"] = fmax;
      if (!peaks.empty()) p["max_peaks"] = peaks;
      emit_output(c, analysis(c, peaks.empty() ? "periodogram" : "periodogram_peaks", p));
    } else if (*fit) {
      emit_output(c, analysis(c, "fit_failures", {{"model", model}, {"label", label}}));
    } else if (*rep) {
      if (!verify_dir.empty()) {
        auto bad = report::verify_manifest(verify_dir);
        for (const auto& f : bad) std::cerr << "digest mismatch: " << f << "\n";
        if (!bad.empty()) return kAnalysisError;
        std::cout << "manifest verified\n";
        return kOk;
      }
      auto cfg = load_config(c);
      auto spec = cfg.report;
      if (paper_bundle || spec.analyses.empty()) {
        auto bundle = report::paper_bundle_spec();
        spec.name = bundle.name;
        spec.analyses = bundle.analyses;
        if (spec.output_dir == report::ReportSpec{}.output_dir) spec.output_dir = bundle.output_dir;
      }
      if (!out_dir.empty()) spec.output_dir = out_dir;
      auto ws = report::load_workspace(cfg.inputs);
      auto manifest = report::run_report(ws, spec);
      std::cout << "wrote " << manifest.files.size() << " files and " << report::kManifestFile
                << " to " << spec.output_dir.string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "hpcwl: " << e.code() << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::input ? kInputError : kAnalysisError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "hpcwl: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "hpcwl: " << e.what() << "\n";
    return kAnalysisError;
  }
  return kOk;
}
