#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "hpcwl/ingest/loaders.hpp"
#include "hpcwl/ingest/types.hpp"

#ifndef HPCWL_DATA_DIR
#define HPCWL_DATA_DIR "data"
#endif

namespace hpcwl::test {

inline std::filesystem::path data_dir() { return HPCWL_DATA_DIR; }

inline const ResourceMap& xsede_resources() {
  static const ResourceMap r = load_resources(data_dir() / "xsede_resources.json");
  return r;
}

inline UnixSeconds at(int y, unsigned m, unsigned d, int hour = 0) {
  return Date(y, m, d).to_unix() + hour * 3600;
}

inline JobRecord job(std::string id, std::string resource, UnixSeconds submit, UnixSeconds start,
                     UnixSeconds end, std::int64_t nodes = 1, std::int64_t cores = 1) {
  JobRecord j;
  j.job_id = std::move(id);
  j.resource = std::move(resource);
  j.user = "u1";
  j.charge_number = "TG-X";
  j.submit_time = submit;
  j.start_time = start;
  j.end_time = end;
  j.nodes = nodes;
  j.cores = cores;
  j.queue = "normal";
  j.exit_status = ExitStatus::completed;
  j.local_su_charged = j.core_hours();
  return j;
}

// Single-window resource with the given geometry, in production from 2000 onwards.
inline ResourceSpec resource(std::string name, std::int64_t nodes, std::int64_t cpn,
                             double factor = 1.0, SuUnit unit = SuUnit::core_hour) {
  ResourceSpec r;
  r.name = std::move(name);
  r.nodes = nodes;
  r.cores_per_node = cpn;
  r.production_start = Date(2000, 1, 1);
  r.su_factors.push_back({Date(2000, 1, 1), std::nullopt, factor});
  r.su_unit = unit;
  return r;
}

// Removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hpcwl-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& text) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace hpcwl::test
