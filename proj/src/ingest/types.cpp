#include "hpcwl/ingest/types.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace hpcwl {

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<NsfUserStatus, 6> kNsfNames{{
    {NsfUserStatus::faculty, "faculty"},
    {NsfUserStatus::postdoc, "postdoc"},
    {NsfUserStatus::grad_student, "grad_student"},
    {NsfUserStatus::univ_research_staff, "univ_research_staff"},
    {NsfUserStatus::other, "other"},
    {NsfUserStatus::unknown, "unknown"},
}};

constexpr NameTable<ExitStatus, 6> kExitNames{{
    {ExitStatus::completed, "completed"},
    {ExitStatus::canceled, "canceled"},
    {ExitStatus::timeout, "timeout"},
    {ExitStatus::failed, "failed"},
    {ExitStatus::node_fail, "node_fail"},
    {ExitStatus::not_available, "not_available"},
}};

constexpr NameTable<ResourceType, 5> kTypeNames{{
    {ResourceType::HPC, "HPC"},
    {ResourceType::HTC, "HTC"},
    {ResourceType::DIC, "DIC"},
    {ResourceType::Cloud, "Cloud"},
    {ResourceType::Vis, "Vis"},
}};

constexpr NameTable<SuUnit, 2> kUnitNames{{
    {SuUnit::core_hour, "core_hour"},
    {SuUnit::node_hour, "node_hour"},
}};

constexpr NameTable<AllocationType, 10> kAllocNames{{
    {AllocationType::XRAC, "XRAC"},
    {AllocationType::Research, "Research"},
    {AllocationType::TRAC, "TRAC"},
    {AllocationType::Startup, "Startup"},
    {AllocationType::CampusChampions, "CampusChampions"},
    {AllocationType::Staff, "Staff"},
    {AllocationType::Educational, "Educational"},
    {AllocationType::Discretionary, "Discretionary"},
    {AllocationType::XSEDE2Staff, "XSEDE2Staff"},
    {AllocationType::SoftwareTestbeds, "SoftwareTestbeds"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E v) {
  for (const auto& [e, n] : table)
    if (e == v) return n;
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view s) {
  for (const auto& [e, n] : table)
    if (n == s) return e;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(NsfUserStatus v) { return name_of(kNsfNames, v); }
std::string_view to_string(ExitStatus v) { return name_of(kExitNames, v); }
std::string_view to_string(ResourceType v) { return name_of(kTypeNames, v); }
std::string_view to_string(SuUnit v) { return name_of(kUnitNames, v); }
std::string_view to_string(AllocationType v) { return name_of(kAllocNames, v); }

std::optional<NsfUserStatus> parse_nsf_user_status(std::string_view s) {
  return value_of(kNsfNames, s);
}
std::optional<ExitStatus> parse_exit_status(std::string_view s) { return value_of(kExitNames, s); }
std::optional<ResourceType> parse_resource_type(std::string_view s) {
  if (s == "Viz") return ResourceType::Vis;
  return value_of(kTypeNames, s);
}
std::optional<SuUnit> parse_su_unit(std::string_view s) { return value_of(kUnitNames, s); }
std::optional<AllocationType> parse_allocation_type(std::string_view s) {
  return value_of(kAllocNames, s);
}

std::string_view to_string(RecordKind k) {
  switch (k) {
    case RecordKind::job:
      return "job";
    case RecordKind::allocation:
      return "allocation";
    case RecordKind::resource:
      return "resource";
  }
  return "?";
}

bool ResourceSpec::is_large_memory_queue(std::string_view queue) const {
  return std::find(large_memory_queues.begin(), large_memory_queues.end(), queue) !=
         large_memory_queues.end();
}

}  // namespace hpcwl
