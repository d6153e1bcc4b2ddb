#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpcwl/metrics/common.hpp"

namespace hpcwl::metrics {

// Community (shared) account -> gateway name. File lines: gateway <TAB> community_user.
using CommunityUserMap = std::map<std::string, std::string, std::less<>>;

CommunityUserMap parse_community_users(std::istream& in);
CommunityUserMap load_community_users(const std::filesystem::path& path);

// Identity key -> email, used to join gateway end users to personal accounts.
// File lines: key <TAB> email. Keys are account user ids or "gateway/gateway_user".
using EmailMap = std::map<std::string, std::string, std::less<>>;

EmailMap parse_email_map(std::istream& in);
EmailMap load_email_map(const std::filesystem::path& path);

enum class GatewayMode { community_user, associated_allocation, gateway_tagged };

std::string_view to_string(GatewayMode m);
std::optional<GatewayMode> parse_gateway_mode(std::string_view s);

struct GatewayUsageRow {
  std::string period;  // empty when no period breakdown was requested
  std::string gateway;
  std::size_t job_count = 0;
  double local_su = 0.0;
  double xd_su = 0.0;
};

struct GatewayUsageResult {
  std::vector<GatewayUsageRow> rows;  // sorted by (period, gateway)
  // Jobs carrying a gateway_user while their account maps to no gateway.
  std::vector<std::string> unknown_gateway_jobs;
};

// community_user: jobs run by a mapped community account.
// associated_allocation: every job on a charge number used by a gateway's community account.
// gateway_tagged: jobs on allocations marked as gateway allocations, grouped by the
// associated gateway where one is known and by charge number otherwise.
GatewayUsageResult gateway_usage(std::span<const JobRecord> jobs,
                                 std::span<const AllocationRecord> allocations,
                                 const ResourceMap& resources, const CommunityUserMap& community,
                                 GatewayMode mode, std::optional<Period> period = std::nullopt);

inline const Date kGatewayReliabilityDate{2015, 4, 1};

struct CensusRow {
  std::string period;
  std::size_t active_hpc_users = 0;
  std::size_t new_hpc_users = 0;
  std::size_t active_gateway_users = 0;
  std::size_t new_gateway_users = 0;
  bool new_gateway_lower_bound = false;  // period starts before the reliability date
  std::size_t combined_active = 0;
  std::size_t combined_new = 0;
};

// Gateway end users are identified per gateway ("gateway/gateway_user"); everyone else by
// account id. "New" means the first-ever job in the data falls in the period.
std::vector<CensusRow> gateway_census(std::span<const JobRecord> jobs,
                                      const CommunityUserMap& community, Period period,
                                      Date reliability_date = kGatewayReliabilityDate);

struct ConversionRow {
  std::string gateway;
  std::string user_key;  // email
  std::size_t gateway_job_count = 0;
  UnixSeconds first_gateway_job = 0;  // submit times
  std::size_t xsede_job_count = 0;
  UnixSeconds first_xsede_job = 0;
};

// Users whose first gateway job precedes their first personal-account job and who ran
// strictly more than min_xsede_jobs personal jobs.
std::vector<ConversionRow> gateway_conversion(std::span<const JobRecord> jobs,
                                              const CommunityUserMap& community,
                                              const EmailMap& emails,
                                              std::size_t min_xsede_jobs = 10);

Table to_table(const GatewayUsageResult& r);
Table to_table(std::span<const CensusRow> rows);
Table to_table(std::span<const ConversionRow> rows);

}  // namespace hpcwl::metrics
