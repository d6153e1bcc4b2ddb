#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpcwl/appident/appident.hpp"
#include "hpcwl/core/time.hpp"

namespace hpcwl::perf {

enum class MetricKind { counter, instantaneous };
enum class SampleTag { periodic, job_prolog, job_epilog };

std::string_view to_string(MetricKind k);
std::string_view to_string(SampleTag t);
std::optional<MetricKind> parse_metric_kind(std::string_view s);
std::optional<SampleTag> parse_sample_tag(std::string_view s);

// Archive metric names understood by the summarizer.
namespace metric {
inline constexpr std::string_view cpu_user = "cpu.user";
inline constexpr std::string_view cpu_total = "cpu.total";
inline constexpr std::string_view lustre_rx = "lnet.rx_bytes";
inline constexpr std::string_view lustre_tx = "lnet.tx_bytes";
inline constexpr std::string_view ib_rx = "ib.rx_bytes";
inline constexpr std::string_view ib_tx = "ib.tx_bytes";
inline constexpr std::string_view file_opens = "llite.open";
inline constexpr std::string_view procs_running = "ps.procs_running";
}  // namespace metric

struct PerfSample {
  std::string node;
  UnixSeconds time = 0;
  std::string metric;
  MetricKind kind = MetricKind::instantaneous;
  double value = 0.0;
  SampleTag tag = SampleTag::periodic;
};

// Per-NUMA-node /sys meminfo values, bytes.
struct NumaMemInfo {
  std::int64_t mem_total = 0;
  std::int64_t mem_free = 0;
  std::int64_t file_pages = 0;
  std::int64_t slab = 0;
};

struct MemInfoSample {
  std::string node;
  UnixSeconds time = 0;
  std::vector<NumaMemInfo> numa;
  SampleTag tag = SampleTag::periodic;
};

// Instrumented launcher record (ibrun/Lariat style).
struct LauncherInfo {
  std::string exe;
  std::int64_t n_processes = 0;
  std::int64_t threads_per_process = 0;
};

enum class LaunchType { serial, multi_process, multi_threaded, multi_process_multi_threaded, unknown };
std::string_view to_string(LaunchType t);

// Everything the archives hold for one job's nodes.
struct JobArchive {
  std::string job_id;
  std::vector<std::string> nodes;
  std::vector<PerfSample> samples;      // time-sorted
  std::vector<MemInfoSample> meminfo;   // time-sorted
  std::optional<LauncherInfo> launcher;
  std::vector<appident::ProcessObservation> processes;
};

struct SummaryIssue {
  std::string code;  // CounterRegression, MissingProlog, MissingEpilog, NonLustreClamp
  std::string node;
  std::string metric;

  friend bool operator==(const SummaryIssue&, const SummaryIssue&) = default;
};

// Absent (nullopt) fields mean the archives did not support a value, never zero.
struct JobPerfSummary {
  std::string job_id;
  std::optional<double> cpu_user_fraction;
  std::optional<double> mem_avg_per_core;  // bytes
  std::optional<double> mem_max_per_core;  // bytes
  std::optional<double> node_mem_total;    // bytes per node, mean over in-job samples
  std::optional<double> lustre_rx;
  std::optional<double> lustre_tx;
  std::optional<double> ib_rx;
  std::optional<double> ib_tx;
  std::optional<double> non_lustre_ib;
  std::optional<double> runnable_threads_median;
  std::optional<double> file_opens;
  std::optional<double> processes_per_node;
  appident::AppLabel app;
  LaunchType launch_type = LaunchType::unknown;
  std::size_t samples_used = 0;
  std::vector<SummaryIssue> issues;

  std::optional<double> lustre_total() const;
  std::optional<double> ib_total() const;
};

}  // namespace hpcwl::perf
