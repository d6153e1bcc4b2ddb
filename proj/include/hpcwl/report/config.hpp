#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hpcwl/core/time.hpp"

namespace hpcwl::report {

inline constexpr const char* kConfigEnvVar = "HPCWL_CONFIG";

struct AnalysisSpec {
  std::string id;  // output file stem
  std::string op;
  std::map<std::string, std::string> params;
};

struct ReportSpec {
  std::string name = "report";
  std::optional<Date> start;  // jobs ending on or after start
  std::optional<Date> end;    // jobs ending before end
  bool exclude_osg = false;
  std::vector<std::string> resources;
  std::vector<std::string> queues;
  std::vector<std::string> formats = {"csv"};  // csv and/or json per table
  std::vector<AnalysisSpec> analyses;
  std::filesystem::path output_dir = "report";
};

struct InputPaths {
  std::filesystem::path jobs;
  std::filesystem::path allocations;
  std::filesystem::path resources;
  std::vector<std::filesystem::path> archives;
  std::optional<std::filesystem::path> app_patterns;
  std::optional<std::filesystem::path> ignore;
  std::optional<std::filesystem::path> community_users;
  std::optional<std::filesystem::path> emails;
  std::optional<std::filesystem::path> population;
  std::optional<std::filesystem::path> tech_index;
};

struct Config {
  InputPaths inputs;
  ReportSpec report;
};

// INI text with sections [inputs], [report] and one [analysis.<id>] per analysis, kept
// in file order. Relative paths resolve against base_dir. Throws SchemaError on bad values.
Config parse_config(std::istream& in, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& path);

// Value of HPCWL_CONFIG, if set and non-empty.
std::optional<std::filesystem::path> default_config_path();

// Throws SchemaError when start >= end or an analysis lacks an op.
void check_spec(const ReportSpec& spec);

std::vector<std::string> split_list(const std::string& text);

}  // namespace hpcwl::report
