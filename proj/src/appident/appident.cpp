#include "hpcwl/appident/appident.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "hpcwl/core/errors.hpp"

namespace hpcwl::appident {

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view basename(std::string_view path) {
  auto slash = path.find_last_of('/');
  return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

}  // namespace

void AppDatabase::add_rule(std::string app, std::string pattern, bool proprietary, std::size_t line) {
  if (app.empty()) throw InvalidPattern(line, "empty application name");
  if (pattern.empty()) throw InvalidPattern(line, "empty pattern for " + app);
  try {
    std::regex re(pattern, std::regex::ECMAScript | std::regex::optimize);
    rules_.push_back({std::move(app), std::move(pattern), std::move(re), proprietary});
  } catch (const std::regex_error& e) {
    throw InvalidPattern(line, "'" + pattern + "': " + e.what());
  }
}

AppDatabase AppDatabase::parse(std::istream& in) {
  AppDatabase db;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    auto cols = split_tabs(text);
    if (cols.size() < 2 || cols.size() > 3)
      throw InvalidPattern(line, "expected app_name<TAB>pattern[<TAB>proprietary]");
    bool proprietary = false;
    if (cols.size() == 3) {
      auto flag = trim(cols[2]);
      if (flag == "true" || flag == "yes" || flag == "1")
        proprietary = true;
      else if (!(flag.empty() || flag == "false" || flag == "no" || flag == "0"))
        throw InvalidPattern(line, "proprietary column must be true/false");
    }
    db.add_rule(std::string(trim(cols[0])), std::string(trim(cols[1])), proprietary, line);
  }
  return db;
}

AppDatabase AppDatabase::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError(path.string());
  return parse(in);
}

AppDatabase AppDatabase::from_patterns(std::span<const AppPattern> apps) {
  AppDatabase db;
  std::size_t line = 0;
  for (const auto& app : apps) {
    if (app.patterns.empty()) throw InvalidPattern(line + 1, "no patterns for " + app.app_name);
    for (const auto& p : app.patterns) db.add_rule(app.app_name, p, app.proprietary, ++line);
  }
  return db;
}

std::vector<AppPattern> AppDatabase::applications() const {
  std::vector<AppPattern> out;
  for (const auto& r : rules_) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const AppPattern& a) { return a.app_name == r.app_name; });
    if (it == out.end()) {
      out.push_back({r.app_name, {r.pattern}, r.proprietary});
    } else {
      it->patterns.push_back(r.pattern);
      it->proprietary = it->proprietary || r.proprietary;
    }
  }
  return out;
}

std::optional<AppLabel> AppDatabase::match(std::string_view exe) const {
  std::string name(basename(exe));
  for (const auto& r : rules_)
    if (std::regex_search(name, r.compiled)) return AppLabel{r.app_name, r.proprietary};
  return std::nullopt;
}

IgnoreList parse_ignore_list(std::istream& in) {
  IgnoreList out;
  std::string raw;
  while (std::getline(in, raw)) {
    auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    out.emplace(text);
  }
  return out;
}

IgnoreList load_ignore_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError(path.string());
  return parse_ignore_list(in);
}

std::optional<std::string> pick_main_process(std::span<const ProcessObservation> observations,
                                             const IgnoreList& ignore) {
  std::vector<const ProcessObservation*> order;
  for (const auto& o : observations) order.push_back(&o);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->unique_pid_count != b->unique_pid_count)
      return a->unique_pid_count > b->unique_pid_count;
    return a->process_name < b->process_name;
  });
  for (const auto* o : order)
    if (!ignore.contains(o->process_name)) return o->process_name;
  return std::nullopt;
}

AppLabel classify_executable(std::string_view exe, const AppDatabase& db, ExeSource source) {
  if (source == ExeSource::none) return {std::string(kNotAvailable), false};
  if (auto hit = db.match(exe)) return *hit;
  return {std::string(kUncategorized), false};
}

AppLabel resolve_job_app(const std::optional<std::string>& launcher_exe,
                         std::span<const ProcessObservation> observations, const AppDatabase& db,
                         const IgnoreList& ignore) {
  if (launcher_exe && !launcher_exe->empty())
    return classify_executable(*launcher_exe, db, ExeSource::launcher);
  if (!observations.empty()) {
    // Process data exists but every name is ignored: nothing to match, so uncategorized.
    auto main = pick_main_process(observations, ignore);
    if (!main) return {std::string(kUncategorized), false};
    return classify_executable(*main, db, ExeSource::process_list);
  }
  return classify_executable("", db, ExeSource::none);
}

}  // namespace hpcwl::appident
