#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hpcwl::appident {

inline constexpr std::string_view kUncategorized = "uncategorized";
inline constexpr std::string_view kNotAvailable = "NA";
inline constexpr std::string_view kMasked = "proprietary-masked";

struct AppPattern {
  std::string app_name;
  std::vector<std::string> patterns;
  bool proprietary = false;
};

struct ProcessObservation {
  std::string process_name;
  int unique_pid_count = 1;
};

// The true label is kept; reported() applies proprietary masking for output.
struct AppLabel {
  std::string name;
  bool proprietary = false;

  std::string reported() const { return proprietary ? std::string(kMasked) : name; }
  friend bool operator==(const AppLabel&, const AppLabel&) = default;
};

enum class ExeSource { launcher, process_list, none };

// Regular-expression database of known applications. Patterns are matched, in file
// order, against the basename of the executable; the first match wins.
class AppDatabase {
 public:
  AppDatabase() = default;

  // Lines: app_name <TAB> pattern [<TAB> proprietary]. Blank lines and '#' comments are
  // skipped. Throws InvalidPattern for bad regexes or malformed lines.
  static AppDatabase parse(std::istream& in);
  static AppDatabase load(const std::filesystem::path& path);
  static AppDatabase from_patterns(std::span<const AppPattern> apps);

  // Grouped view: one entry per application in first-appearance order.
  std::vector<AppPattern> applications() const;
  std::size_t size() const { return rules_.size(); }

  std::optional<AppLabel> match(std::string_view exe) const;

 private:
  struct Rule {
    std::string app_name;
    std::string pattern;
    std::regex compiled;
    bool proprietary;
  };
  void add_rule(std::string app, std::string pattern, bool proprietary, std::size_t line);

  std::vector<Rule> rules_;
};

using IgnoreList = std::set<std::string, std::less<>>;

IgnoreList load_ignore_list(const std::filesystem::path& path);
IgnoreList parse_ignore_list(std::istream& in);

// Most unique PIDs first; equal counts break lexicographically by name.
std::optional<std::string> pick_main_process(std::span<const ProcessObservation> observations,
                                             const IgnoreList& ignore);

AppLabel classify_executable(std::string_view exe, const AppDatabase& db, ExeSource source);

// Launcher metadata wins over the process list; with neither the job is "NA".
AppLabel resolve_job_app(const std::optional<std::string>& launcher_exe,
                         std::span<const ProcessObservation> observations, const AppDatabase& db,
                         const IgnoreList& ignore);

}  // namespace hpcwl::appident
