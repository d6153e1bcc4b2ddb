#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hpcwl/core/time.hpp"
#include "hpcwl/ingest/types.hpp"

namespace hpcwl::report {

struct SynthOptions {
  std::uint64_t seed = 20190101;
  std::size_t n_jobs = 10000;
  Date start{2016, 1, 1};
  int days = 730;
  double archive_fraction = 0.15;  // of eligible jobs (HPC/DIC, at most 4 nodes)
};

struct SynthData {
  std::vector<JobRecord> jobs;
  std::vector<AllocationRecord> allocations;
  std::vector<std::string> archive_lines;   // JSON lines
  std::vector<std::string> community_lines;  // gateway <TAB> account
  std::vector<std::string> email_lines;      // key <TAB> email
  std::vector<std::pair<std::string, double>> population;
  std::vector<std::pair<std::string, double>> tech_index;
};

// Deterministic for a given seed and resource map. Jobs are placed only on resources in
// production at their submit time.
SynthData generate(const ResourceMap& resources, const SynthOptions& options = {});

struct SynthSources {
  std::filesystem::path resources;  // copied as resources.json
  std::optional<std::filesystem::path> app_patterns;
  std::optional<std::filesystem::path> ignore;
};

// Writes jobs.jsonl, allocations.csv, archives.jsonl, community_users.tsv, emails.tsv,
// population.csv, tech_index.csv, the copied inputs and paper_bundle.ini into dir.
void write_dataset(const std::filesystem::path& dir, const SynthSources& sources,
                   const SynthOptions& options = {});

// Serializers matching the loader schemas.
std::string job_to_jsonl(const JobRecord& job);
std::string allocations_to_csv(const std::vector<AllocationRecord>& allocations);

}  // namespace hpcwl::report
