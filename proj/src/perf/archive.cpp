#include "hpcwl/perf/archive.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hpcwl/core/errors.hpp"

namespace hpcwl::perf {

using nlohmann::json;

std::string_view to_string(MetricKind k) {
  return k == MetricKind::counter ? "counter" : "instantaneous";
}

std::string_view to_string(SampleTag t) {
  switch (t) {
    case SampleTag::periodic: return "periodic";
    case SampleTag::job_prolog: return "job_prolog";
    case SampleTag::job_epilog: return "job_epilog";
  }
  return "periodic";
}

std::optional<MetricKind> parse_metric_kind(std::string_view s) {
  if (s == "counter") return MetricKind::counter;
  if (s == "instantaneous") return MetricKind::instantaneous;
  return std::nullopt;
}

std::optional<SampleTag> parse_sample_tag(std::string_view s) {
  if (s == "periodic") return SampleTag::periodic;
  if (s == "job_prolog") return SampleTag::job_prolog;
  if (s == "job_epilog") return SampleTag::job_epilog;
  return std::nullopt;
}

std::string_view to_string(LaunchType t) {
  switch (t) {
    case LaunchType::serial: return "serial";
    case LaunchType::multi_process: return "multi_process";
    case LaunchType::multi_threaded: return "multi_threaded";
    case LaunchType::multi_process_multi_threaded: return "multi_process_multi_threaded";
    case LaunchType::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

template <class T>
T field(const json& obj, const char* name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) throw SchemaError(line, name, "missing");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(line, name, "wrong type");
  }
}

SampleTag tag_of(const json& obj, std::size_t line) {
  auto it = obj.find("tag");
  if (it == obj.end() || it->is_null()) return SampleTag::periodic;
  auto t = parse_sample_tag(field<std::string>(obj, "tag", line));
  if (!t) throw SchemaError(line, "tag", "unknown tag");
  return *t;
}

}  // namespace

void ArchiveStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError(path.string());
  load(in);
}

void ArchiveStore::load(std::istream& in) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SchemaError(line, "", e.what());
    }
    if (!obj.is_object()) throw SchemaError(line, "", "expected a JSON object");
    auto type = field<std::string>(obj, "type", line);
    if (type == "sample") {
      PerfSample s;
      s.node = field<std::string>(obj, "node", line);
      s.time = field<std::int64_t>(obj, "time", line);
      s.metric = field<std::string>(obj, "metric", line);
      auto kind = parse_metric_kind(field<std::string>(obj, "kind", line));
      if (!kind) throw SchemaError(line, "kind", "expected counter or instantaneous");
      s.kind = *kind;
      s.value = field<double>(obj, "value", line);
      if (!(s.value >= 0)) throw SchemaError(line, "value", "must be >= 0");
      s.tag = tag_of(obj, line);
      series_[s.node][s.metric].push_back(std::move(s));
      ++n_samples_;
    } else if (type == "meminfo") {
      MemInfoSample m;
      m.node = field<std::string>(obj, "node", line);
      m.time = field<std::int64_t>(obj, "time", line);
      m.tag = tag_of(obj, line);
      auto numa = obj.find("numa");
      if (numa == obj.end() || !numa->is_array() || numa->empty())
        throw SchemaError(line, "numa", "expected a non-empty array");
      for (const auto& n : *numa) {
        if (!n.is_object()) throw SchemaError(line, "numa", "expected objects");
        m.numa.push_back({field<std::int64_t>(n, "mem_total", line),
                          field<std::int64_t>(n, "mem_free", line),
                          field<std::int64_t>(n, "file_pages", line),
                          field<std::int64_t>(n, "slab", line)});
      }
      meminfo_[m.node].push_back(std::move(m));
      ++n_samples_;
    } else if (type == "job_nodes") {
      auto id = field<std::string>(obj, "job_id", line);
      auto nodes = field<std::vector<std::string>>(obj, "nodes", line);
      auto& dst = job_nodes_[id];
      for (auto& n : nodes)
        if (std::find(dst.begin(), dst.end(), n) == dst.end()) dst.push_back(std::move(n));
    } else if (type == "launcher") {
      auto id = field<std::string>(obj, "job_id", line);
      LauncherInfo l{field<std::string>(obj, "exe", line),
                     field<std::int64_t>(obj, "n_processes", line),
                     field<std::int64_t>(obj, "threads_per_process", line)};
      if (l.n_processes < 0 || l.threads_per_process < 0)
        throw SchemaError(line, "n_processes", "counts must be >= 0");
      launchers_[id] = std::move(l);
    } else if (type == "procs") {
      auto id = field<std::string>(obj, "job_id", line);
      auto obs = obj.find("observations");
      if (obs == obj.end() || !obs->is_array())
        throw SchemaError(line, "observations", "expected an array");
      auto& dst = procs_[id];
      for (const auto& o : *obs) {
        appident::ProcessObservation p{field<std::string>(o, "name", line),
                                       field<int>(o, "pids", line)};
        if (p.unique_pid_count < 1) throw SchemaError(line, "pids", "must be >= 1");
        dst.push_back(std::move(p));
      }
    } else {
      throw SchemaError(line, "type", "unknown record type '" + type + "'");
    }
  }
  sort_all();
}

void ArchiveStore::sort_all() {
  for (auto& [node, metrics] : series_)
    for (auto& [name, s] : metrics)
      std::stable_sort(s.begin(), s.end(),
                       [](const PerfSample& a, const PerfSample& b) { return a.time < b.time; });
  for (auto& [node, v] : meminfo_)
    std::stable_sort(v.begin(), v.end(),
                     [](const MemInfoSample& a, const MemInfoSample& b) { return a.time < b.time; });
}

bool ArchiveStore::has_nodes(std::string_view job_id) const {
  auto it = job_nodes_.find(job_id);
  return it != job_nodes_.end() && !it->second.empty();
}

JobArchive ArchiveStore::job_archive(const JobRecord& job) const {
  JobArchive out;
  out.job_id = job.job_id;
  if (auto it = job_nodes_.find(job.job_id); it != job_nodes_.end()) out.nodes = it->second;
  if (auto it = launchers_.find(job.job_id); it != launchers_.end()) out.launcher = it->second;
  if (auto it = procs_.find(job.job_id); it != procs_.end()) out.processes = it->second;

  auto before = [](const PerfSample& p, UnixSeconds t) { return p.time < t; };
  auto after = [](UnixSeconds t, const PerfSample& p) { return t < p.time; };
  for (const auto& node : out.nodes) {
    if (auto it = series_.find(node); it != series_.end()) {
      for (const auto& [name, s] : it->second) {
        if (s.empty()) continue;
        auto lo = std::upper_bound(s.begin(), s.end(), job.start_time, after);
        auto hi = std::lower_bound(s.begin(), s.end(), job.end_time, before);
        if (s.front().kind == MetricKind::counter) {
          if (lo != s.begin()) --lo;
          if (hi != s.end()) ++hi;
        }
        if (lo < hi) out.samples.insert(out.samples.end(), lo, hi);
      }
    }
    if (auto it = meminfo_.find(node); it != meminfo_.end()) {
      for (const auto& m : it->second)
        if (m.time > job.start_time && m.time < job.end_time) out.meminfo.push_back(m);
    }
  }
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const PerfSample& a, const PerfSample& b) { return a.time < b.time; });
  std::stable_sort(out.meminfo.begin(), out.meminfo.end(),
                   [](const MemInfoSample& a, const MemInfoSample& b) { return a.time < b.time; });
  return out;
}

}  // namespace hpcwl::perf
