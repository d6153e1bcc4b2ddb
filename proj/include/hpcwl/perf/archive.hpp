#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>

#include "hpcwl/ingest/types.hpp"
#include "hpcwl/perf/types.hpp"

namespace hpcwl::perf {

// Indexed node-level archives. Records are JSON lines tagged by "type":
// job_nodes, sample, meminfo, launcher, procs (see docs/formats.md).
class ArchiveStore {
 public:
  void load(const std::filesystem::path& path);
  void load(std::istream& in);

  // Everything relevant to the job: for each counter series the readings from the last
  // one at or before start through the first one at or after end, meminfo and
  // instantaneous samples inside the run window, launcher and process records.
  JobArchive job_archive(const JobRecord& job) const;

  bool has_nodes(std::string_view job_id) const;
  std::size_t sample_count() const { return n_samples_; }

 private:
  using Series = std::vector<PerfSample>;
  std::map<std::string, std::vector<std::string>, std::less<>> job_nodes_;
  std::map<std::string, std::map<std::string, Series, std::less<>>, std::less<>> series_;
  std::map<std::string, std::vector<MemInfoSample>, std::less<>> meminfo_;
  std::map<std::string, LauncherInfo, std::less<>> launchers_;
  std::map<std::string, std::vector<appident::ProcessObservation>, std::less<>> procs_;
  std::size_t n_samples_ = 0;

  void sort_all();
};

}  // namespace hpcwl::perf
