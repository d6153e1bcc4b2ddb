#include "hpcwl/report/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hpcwl/core/errors.hpp"

namespace hpcwl::report {

namespace pt = boost::property_tree;

namespace {

constexpr std::string_view kAnalysisPrefix = "analysis.";

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw SchemaError(0, section + "." + key, "expected true or false, got '" + v + "'");
}

Date parse_date(const std::string& section, const std::string& key, const std::string& v) {
  auto d = Date::try_parse(v);
  if (!d) throw SchemaError(0, section + "." + key, "not an ISO-8601 date: '" + v + "'");
  return *d;
}

void read_inputs(const pt::ptree& sec, const std::filesystem::path& base, InputPaths& in) {
  static const std::set<std::string> kKnown = {
      "jobs",   "allocations",     "resources", "archives",   "app_patterns",
      "ignore", "community_users", "emails",    "population", "tech_index"};
  for (const auto& [key, node] : sec) {
    if (!kKnown.contains(key)) throw SchemaError(0, "inputs." + key, "unknown key");
    auto v = trim(node.data());
    if (v.empty()) continue;
    if (key == "jobs") in.jobs = resolve(base, v);
    else if (key == "allocations") in.allocations = resolve(base, v);
    else if (key == "resources") in.resources = resolve(base, v);
    else if (key == "archives")
      for (const auto& a : split_list(v)) in.archives.push_back(resolve(base, a));
    else if (key == "app_patterns") in.app_patterns = resolve(base, v);
    else if (key == "ignore") in.ignore = resolve(base, v);
    else if (key == "community_users") in.community_users = resolve(base, v);
    else if (key == "emails") in.emails = resolve(base, v);
    else if (key == "population") in.population = resolve(base, v);
    else if (key == "tech_index") in.tech_index = resolve(base, v);
  }
}

void read_report(const pt::ptree& sec, const std::filesystem::path& base, ReportSpec& r) {
  for (const auto& [key, node] : sec) {
    auto v = trim(node.data());
    if (key == "name") r.name = v;
    else if (key == "output_dir") r.output_dir = resolve(base, v);
    else if (key == "start") r.start = parse_date("report", key, v);
    else if (key == "end") r.end = parse_date("report", key, v);
    else if (key == "exclude_osg") r.exclude_osg = parse_bool("report", key, v);
    else if (key == "resources") r.resources = split_list(v);
    else if (key == "queues") r.queues = split_list(v);
    else if (key == "formats") {
      r.formats = split_list(v);
      for (const auto& f : r.formats)
        if (f != "csv" && f != "json") throw SchemaError(0, "report.formats", "unknown format " + f);
    } else {
      throw SchemaError(0, "report." + key, "unknown key");
    }
  }
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto item = trim(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Config parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw SchemaError(e.line(), "", e.message());
  }
  Config cfg;
  for (const auto& [section, node] : tree) {
    if (section == "inputs") {
      read_inputs(node, base_dir, cfg.inputs);
    } else if (section == "report") {
      read_report(node, base_dir, cfg.report);
    } else if (section.starts_with(kAnalysisPrefix)) {
      AnalysisSpec a;
      a.id = section.substr(kAnalysisPrefix.size());
      if (a.id.empty()) throw SchemaError(0, section, "analysis id is empty");
      for (const auto& [key, value] : node) {
        if (key == "op") a.op = trim(value.data());
        else a.params[key] = trim(value.data());
      }
      cfg.report.analyses.push_back(std::move(a));
    } else {
      throw SchemaError(0, section, "unknown section");
    }
  }
  check_spec(cfg.report);
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError(path.string());
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return parse_config(in, base);
}

std::optional<std::filesystem::path> default_config_path() {
  const char* v = std::getenv(kConfigEnvVar);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::filesystem::path(v);
}

void check_spec(const ReportSpec& spec) {
  if (spec.start && spec.end && !(*spec.start < *spec.end))
    throw SchemaError(0, "report.start", "start must precede end");
  std::set<std::string> ids;
  for (const auto& a : spec.analyses) {
    if (a.op.empty()) throw SchemaError(0, "analysis." + a.id, "missing op");
    if (!ids.insert(a.id).second) throw SchemaError(0, "analysis." + a.id, "duplicate id");
  }
}

}  // namespace hpcwl::report
