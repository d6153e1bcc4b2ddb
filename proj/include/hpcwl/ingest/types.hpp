#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpcwl/core/time.hpp"

namespace hpcwl {

enum class NsfUserStatus { faculty, postdoc, grad_student, univ_research_staff, other, unknown };
enum class ExitStatus { completed, canceled, timeout, failed, node_fail, not_available };
enum class ResourceType { HPC, HTC, DIC, Cloud, Vis };
enum class SuUnit { core_hour, node_hour };
enum class AllocationType {
  XRAC,
  Research,
  TRAC,
  Startup,
  CampusChampions,
  Staff,
  Educational,
  Discretionary,
  XSEDE2Staff,
  SoftwareTestbeds
};

std::string_view to_string(NsfUserStatus v);
std::string_view to_string(ExitStatus v);
std::string_view to_string(ResourceType v);
std::string_view to_string(SuUnit v);
std::string_view to_string(AllocationType v);

// Parsers return nullopt for unrecognized names.
std::optional<NsfUserStatus> parse_nsf_user_status(std::string_view s);
std::optional<ExitStatus> parse_exit_status(std::string_view s);
std::optional<ResourceType> parse_resource_type(std::string_view s);
std::optional<SuUnit> parse_su_unit(std::string_view s);
std::optional<AllocationType> parse_allocation_type(std::string_view s);

inline constexpr ExitStatus kAllExitStatuses[] = {
    ExitStatus::completed, ExitStatus::canceled,  ExitStatus::timeout,
    ExitStatus::failed,    ExitStatus::node_fail, ExitStatus::not_available};

struct ProjectHierarchy {
  std::string directorate;
  std::string parent_science;
  std::string field_of_science;

  friend bool operator==(const ProjectHierarchy&, const ProjectHierarchy&) = default;
};

struct JobRecord {
  std::string job_id;
  std::string resource;
  std::string user;
  std::string charge_number;
  ProjectHierarchy project;
  NsfUserStatus nsf_user_status = NsfUserStatus::unknown;
  UnixSeconds submit_time = 0;
  UnixSeconds start_time = 0;
  UnixSeconds end_time = 0;
  std::int64_t nodes = 1;
  std::int64_t cores = 1;
  std::string queue;
  ExitStatus exit_status = ExitStatus::not_available;
  std::optional<std::string> gateway_user;
  std::optional<std::string> state_of_origin;
  double local_su_charged = 0.0;

  UnixSeconds wall_seconds() const { return end_time - start_time; }
  UnixSeconds wait_seconds() const { return start_time - submit_time; }
  double wall_hours() const { return static_cast<double>(wall_seconds()) / 3600.0; }
  double core_hours() const { return static_cast<double>(cores) * wall_hours(); }
  double node_hours() const { return static_cast<double>(nodes) * wall_hours(); }

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

// One conversion-factor window, closed-open: [start, end). An absent end is open-ended.
struct SuFactorWindow {
  Date start;
  std::optional<Date> end;
  double factor = 1.0;

  bool covers(Date d) const { return start <= d && (!end || d < *end); }
};

struct ResourceSpec {
  std::string name;
  ResourceType rtype = ResourceType::HPC;
  std::int64_t nodes = 0;
  std::int64_t cores_per_node = 0;
  std::optional<std::uint64_t> mem_per_node;  // bytes
  Date production_start;
  std::optional<Date> production_end;
  std::vector<SuFactorWindow> su_factors;  // sorted by start
  SuUnit su_unit = SuUnit::core_hour;
  std::vector<std::string> large_memory_queues;

  std::int64_t total_cores() const { return nodes * cores_per_node; }
  bool is_large_memory_queue(std::string_view queue) const;
};

using ResourceMap = std::map<std::string, ResourceSpec, std::less<>>;

struct AllocationRecord {
  std::string charge_number;
  std::string resource;
  AllocationType alloc_type = AllocationType::Startup;
  std::string discipline;
  double awarded_local_su = 0.0;
  double used_local_su = 0.0;
  Date award_date;
  bool is_gateway_tagged = false;

  friend bool operator==(const AllocationRecord&, const AllocationRecord&) = default;
};

enum class RecordKind { job, allocation, resource };
std::string_view to_string(RecordKind k);

// Locates the record a flag refers to: index into the Dataset's vector for jobs and
// allocations, and the resource name for resources.
struct RecordLocator {
  RecordKind kind = RecordKind::job;
  std::size_t index = 0;
  std::string key;

  friend bool operator==(const RecordLocator&, const RecordLocator&) = default;
};

struct QualityFlag {
  RecordLocator locator;
  std::string issue;
  std::string detail;

  friend bool operator==(const QualityFlag&, const QualityFlag&) = default;
};

// A row the loader refused; code names the error class (SchemaError, TimestampOrderError, ...).
struct Rejection {
  std::size_t row = 0;
  std::string field;
  std::string code;
  std::string message;
};

template <typename T>
struct Loaded {
  std::vector<T> records;
  std::vector<Rejection> rejections;
  std::vector<QualityFlag> flags;
};

namespace issue {
inline constexpr std::string_view production_window = "production_window";
inline constexpr std::string_view geometry = "geometry";
inline constexpr std::string_view aggregated_accounting = "aggregated_accounting";
inline constexpr std::string_view duplicate_allocation = "duplicate_allocation";
inline constexpr std::string_view unused_allocation = "unused_allocation";
}  // namespace issue

}  // namespace hpcwl
