#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hpcwl/appident/appident.hpp"
#include "hpcwl/core/table.hpp"
#include "hpcwl/ingest/dataset.hpp"
#include "hpcwl/metrics/common.hpp"
#include "hpcwl/metrics/gateway.hpp"
#include "hpcwl/metrics/geo.hpp"
#include "hpcwl/perf/archive.hpp"
#include "hpcwl/perf/summarize.hpp"
#include "hpcwl/report/config.hpp"

namespace hpcwl::report {

using SummaryMap = std::map<std::string, perf::JobPerfSummary, std::less<>>;

// Everything a report reads. Built once and shared read-only between analyses.
struct Workspace {
  std::shared_ptr<const Dataset> dataset;
  std::vector<JobRecord> population;  // jobs eligible for per-job metrics
  SummaryMap summaries;
  std::optional<appident::AppDatabase> app_db;
  appident::IgnoreList ignore;
  metrics::CommunityUserMap community;
  metrics::EmailMap emails;
  metrics::StateTable population_by_state;
  metrics::StateTable tech_index;
};

// Loads jobs, allocations and resources, then appends validate() flags.
Dataset load_dataset(const InputPaths& inputs);

// One summary per job whose node list is in the archives.
SummaryMap summarize_all(std::span<const JobRecord> jobs, const ResourceMap& resources,
                         const perf::ArchiveStore& archives,
                         const perf::SummarizeOptions& options = {});

Workspace load_workspace(const InputPaths& inputs);

struct AnalysisOutput {
  Table table;
  std::optional<nlohmann::json> document;  // written as JSON instead of the table
};

// Report-level filter: date range on end_time, OSG exclusion, resources, queues.
metrics::JobFilter report_filter(const ReportSpec& spec);

// Throws UnknownAnalysis for an unrecognized op. Parameter errors are SchemaErrors.
AnalysisOutput run_analysis(const Workspace& ws, const AnalysisSpec& analysis,
                            const metrics::JobFilter& filter);

std::vector<std::string> known_analyses();

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::size_t rows = 0;
  std::string sha256;
};

struct Manifest {
  std::string name;
  std::vector<ManifestEntry> files;  // sorted by path

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

inline constexpr const char* kManifestFile = "manifest.json";

// Writes one file per analysis (and format), then manifest.json. Errors raised inside an
// analysis come back as AnalysisError carrying the analysis id.
Manifest run_report(const Workspace& ws, const ReportSpec& spec);

// Files in the manifest whose current digest differs (or which are missing).
std::vector<std::string> verify_manifest(const std::filesystem::path& output_dir);

// Built-in spec covering every in-scope table and figure.
ReportSpec paper_bundle_spec();

}  // namespace hpcwl::report
