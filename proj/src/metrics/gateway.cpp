#include "hpcwl/metrics/gateway.hpp"

#include <fstream>
#include <set>

#include "hpcwl/core/errors.hpp"
#include "hpcwl/ingest/su.hpp"

namespace hpcwl::metrics {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Two tab-separated columns per line; '#' comments and blank lines skipped.
std::vector<std::pair<std::string, std::string>> read_pairs(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    auto tab = text.find('\t');
    if (tab == std::string::npos || text.find('\t', tab + 1) != std::string::npos)
      throw SchemaError(line, "", "expected two tab-separated columns");
    auto a = trim(text.substr(0, tab));
    auto b = trim(text.substr(tab + 1));
    if (a.empty() || b.empty()) throw SchemaError(line, "", "empty column");
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

std::string gateway_key(const std::string& gateway, const std::string& user) {
  return gateway + "/" + user;
}

const std::string* gateway_of(const JobRecord& j, const CommunityUserMap& community) {
  auto it = community.find(j.user);
  return it == community.end() ? nullptr : &it->second;
}

}  // namespace

CommunityUserMap parse_community_users(std::istream& in) {
  CommunityUserMap out;
  for (auto& [gateway, user] : read_pairs(in)) out[user] = gateway;
  return out;
}

CommunityUserMap load_community_users(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError(path.string());
  return parse_community_users(in);
}

EmailMap parse_email_map(std::istream& in) {
  EmailMap out;
  for (auto& [key, email] : read_pairs(in)) out[key] = email;
  return out;
}

EmailMap load_email_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError(path.string());
  return parse_email_map(in);
}

std::string_view to_string(GatewayMode m) {
  switch (m) {
    case GatewayMode::community_user: return "community_user";
    case GatewayMode::associated_allocation: return "associated_allocation";
    case GatewayMode::gateway_tagged: return "gateway_tagged";
  }
  return "community_user";
}

std::optional<GatewayMode> parse_gateway_mode(std::string_view s) {
  for (auto m : {GatewayMode::community_user, GatewayMode::associated_allocation,
                 GatewayMode::gateway_tagged})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

GatewayUsageResult gateway_usage(std::span<const JobRecord> jobs,
                                 std::span<const AllocationRecord> allocations,
                                 const ResourceMap& resources, const CommunityUserMap& community,
                                 GatewayMode mode, std::optional<Period> period) {
  GatewayUsageResult out;
  // Charge numbers used by each gateway's community accounts.
  std::map<std::string, std::string, std::less<>> charge_gateway;
  for (const auto& j : jobs)
    if (const auto* g = gateway_of(j, community)) charge_gateway.emplace(j.charge_number, *g);
  std::set<std::string, std::less<>> tagged;
  for (const auto& a : allocations)
    if (a.is_gateway_tagged) tagged.insert(a.charge_number);

  std::map<std::pair<std::string, std::string>, GatewayUsageRow> acc;
  for (const auto& j : jobs) {
    const auto* g = gateway_of(j, community);
    if (j.gateway_user && !g) out.unknown_gateway_jobs.push_back(j.job_id);
    std::string name;
    switch (mode) {
      case GatewayMode::community_user:
        if (!g) continue;
        name = *g;
        break;
      case GatewayMode::associated_allocation: {
        auto it = charge_gateway.find(j.charge_number);
        if (it == charge_gateway.end()) continue;
        name = it->second;
        break;
      }
      case GatewayMode::gateway_tagged: {
        if (!tagged.contains(j.charge_number)) continue;
        auto it = charge_gateway.find(j.charge_number);
        name = it == charge_gateway.end() ? j.charge_number : it->second;
        break;
      }
    }
    std::string p = period ? period_label(j.end_time, *period) : std::string();
    auto& row = acc[{p, name}];
    row.period = p;
    row.gateway = name;
    ++row.job_count;
    row.local_su += j.local_su_charged;
    row.xd_su += job_xd_su(j, resources);
  }
  for (auto& [k, r] : acc) out.rows.push_back(std::move(r));
  return out;
}

std::vector<CensusRow> gateway_census(std::span<const JobRecord> jobs,
                                      const CommunityUserMap& community, Period period,
                                      Date reliability_date) {
  struct Seen {
    std::set<std::string> hpc, gw;
  };
  std::map<std::string, Seen> active;
  std::map<std::string, UnixSeconds> first_hpc, first_gw;
  for (const auto& j : jobs) {
    const auto* g = gateway_of(j, community);
    auto p = period_label(j.end_time, period);
    if (g) {
      if (!j.gateway_user) continue;
      auto key = gateway_key(*g, *j.gateway_user);
      active[p].gw.insert(key);
      auto [it, fresh] = first_gw.emplace(key, j.end_time);
      if (!fresh) it->second = std::min(it->second, j.end_time);
    } else {
      active[p].hpc.insert(j.user);
      auto [it, fresh] = first_hpc.emplace(j.user, j.end_time);
      if (!fresh) it->second = std::min(it->second, j.end_time);
    }
  }
  std::map<std::string, std::pair<std::size_t, std::size_t>> fresh;
  for (const auto& [u, t] : first_hpc) ++fresh[period_label(t, period)].first;
  for (const auto& [u, t] : first_gw) ++fresh[period_label(t, period)].second;

  std::vector<CensusRow> out;
  for (const auto& [p, s] : active) {
    CensusRow r;
    r.period = p;
    r.active_hpc_users = s.hpc.size();
    r.active_gateway_users = s.gw.size();
    r.new_hpc_users = fresh[p].first;
    r.new_gateway_users = fresh[p].second;
    r.combined_active = r.active_hpc_users + r.active_gateway_users;
    r.combined_new = r.new_hpc_users + r.new_gateway_users;
    out.push_back(r);
  }
  std::map<std::string, UnixSeconds> starts;
  for (const auto& j : jobs) starts.emplace(period_label(j.end_time, period), period_start(j.end_time, period));
  for (auto& r : out) r.new_gateway_lower_bound = starts[r.period] < reliability_date.to_unix();
  return out;
}

std::vector<ConversionRow> gateway_conversion(std::span<const JobRecord> jobs,
                                              const CommunityUserMap& community,
                                              const EmailMap& emails,
                                              std::size_t min_xsede_jobs) {
  struct Personal {
    std::size_t count = 0;
    UnixSeconds first = 0;
  };
  std::map<std::string, Personal> personal;  // by email
  std::map<std::pair<std::string, std::string>, ConversionRow> gw;  // (gateway, email)
  for (const auto& j : jobs) {
    const auto* g = gateway_of(j, community);
    if (g) {
      if (!j.gateway_user) continue;
      auto it = emails.find(gateway_key(*g, *j.gateway_user));
      const std::string& email = it == emails.end() ? *j.gateway_user : it->second;
      auto& row = gw[{*g, email}];
      if (row.gateway_job_count == 0 || j.submit_time < row.first_gateway_job)
        row.first_gateway_job = j.submit_time;
      row.gateway = *g;
      row.user_key = email;
      ++row.gateway_job_count;
    } else {
      auto it = emails.find(j.user);
      if (it == emails.end()) continue;
      auto& p = personal[it->second];
      if (p.count == 0 || j.submit_time < p.first) p.first = j.submit_time;
      ++p.count;
    }
  }
  std::vector<ConversionRow> out;
  for (auto& [key, row] : gw) {
    auto it = personal.find(key.second);
    if (it == personal.end()) continue;
    if (it->second.count <= min_xsede_jobs) continue;
    if (!(row.first_gateway_job < it->second.first)) continue;
    row.xsede_job_count = it->second.count;
    row.first_xsede_job = it->second.first;
    out.push_back(row);
  }
  return out;
}

Table to_table(const GatewayUsageResult& r) {
  Table t({"period", "gateway", "job_count", "local_su", "xd_su"});
  for (const auto& row : r.rows)
    t.add_row({row.period, row.gateway, static_cast<std::int64_t>(row.job_count), row.local_su, row.xd_su});
  return t;
}

Table to_table(std::span<const CensusRow> rows) {
  Table t({"period", "active_hpc_users", "new_hpc_users", "active_gateway_users",
           "new_gateway_users", "new_gateway_lower_bound", "combined_active", "combined_new"});
  for (const auto& r : rows)
    t.add_row({r.period, static_cast<std::int64_t>(r.active_hpc_users),
               static_cast<std::int64_t>(r.new_hpc_users),
               static_cast<std::int64_t>(r.active_gateway_users),
               static_cast<std::int64_t>(r.new_gateway_users),
               std::string(r.new_gateway_lower_bound ? "true" : "false"),
               static_cast<std::int64_t>(r.combined_active), static_cast<std::int64_t>(r.combined_new)});
  return t;
}

Table to_table(std::span<const ConversionRow> rows) {
  Table t({"gateway", "user_key", "gateway_job_count", "first_gateway_job", "xsede_job_count",
           "first_xsede_job"});
  for (const auto& r : rows)
    t.add_row({r.gateway, r.user_key, static_cast<std::int64_t>(r.gateway_job_count),
               Date::from_unix(r.first_gateway_job).to_string(),
               static_cast<std::int64_t>(r.xsede_job_count),
               Date::from_unix(r.first_xsede_job).to_string()});
  return t;
}

}  // namespace hpcwl::metrics
