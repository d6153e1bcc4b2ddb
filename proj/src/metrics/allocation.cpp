#include "hpcwl/metrics/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hpcwl/core/errors.hpp"
#include "hpcwl/core/stats.hpp"

namespace hpcwl::metrics {

std::optional<AllocGroupBy> parse_alloc_group_by(std::string_view s) {
  if (s == "all") return AllocGroupBy::all;
  if (s == "resource") return AllocGroupBy::resource;
  if (s == "alloc_type" || s == "type") return AllocGroupBy::alloc_type;
  if (s == "discipline") return AllocGroupBy::discipline;
  return std::nullopt;
}

AllocationStats allocation_stats(std::string group, std::span<const AllocationRecord> allocs) {
  if (allocs.empty()) throw EmptyGroup(group);
  AllocationStats s;
  s.group = std::move(group);
  s.n_alloc = allocs.size();
  std::vector<double> awarded;
  awarded.reserve(allocs.size());
  for (const auto& a : allocs) {
    if (a.used_local_su == 0.0) ++s.n_unused;
    s.total_awarded += a.awarded_local_su;
    s.total_used += a.used_local_su;
    awarded.push_back(a.awarded_local_su);
  }
  if (s.total_awarded > 0) s.utilization_pct = 100.0 * s.total_used / s.total_awarded;
  s.mean = stats::mean(awarded);
  s.variance = stats::sample_variance(awarded);
  s.median = stats::median(std::move(awarded));
  return s;
}

std::vector<AllocationStats> allocation_utilization(std::span<const AllocationRecord> allocs,
                                                    AllocGroupBy by) {
  std::map<std::string, std::vector<AllocationRecord>> groups;
  for (const auto& a : allocs) {
    std::string key;
    switch (by) {
      case AllocGroupBy::all: key = "All"; break;
      case AllocGroupBy::resource: key = a.resource; break;
      case AllocGroupBy::alloc_type: key = std::string(to_string(a.alloc_type)); break;
      case AllocGroupBy::discipline: key = a.discipline; break;
    }
    groups[key].push_back(a);
  }
  std::vector<AllocationStats> out;
  for (auto& [key, members] : groups) out.push_back(allocation_stats(key, members));
  return out;
}

namespace {

std::vector<AllocationRecord> select_fraction(std::span<const AllocationRecord> allocs, double k,
                                              bool top) {
  if (!(k > 0.0 && k <= 1.0)) throw DegenerateInput("fraction must be in (0, 1]");
  if (allocs.empty()) return {};
  std::vector<double> sizes;
  for (const auto& a : allocs) sizes.push_back(a.awarded_local_su);
  if (top)
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
  else
    std::sort(sizes.begin(), sizes.end());
  auto n = static_cast<std::size_t>(std::ceil(k * static_cast<double>(sizes.size()) - 1e-9));
  n = std::clamp<std::size_t>(n, 1, sizes.size());
  double threshold = sizes[n - 1];
  std::vector<AllocationRecord> out;
  for (const auto& a : allocs)
    if (top ? a.awarded_local_su >= threshold : a.awarded_local_su <= threshold) out.push_back(a);
  return out;
}

}  // namespace

std::vector<AllocationRecord> top_fraction(std::span<const AllocationRecord> allocs, double k) {
  return select_fraction(allocs, k, true);
}

std::vector<AllocationRecord> bottom_fraction(std::span<const AllocationRecord> allocs, double k) {
  return select_fraction(allocs, k, false);
}

std::vector<AllocationStats> allocation_size_summary(std::span<const AllocationRecord> allocs) {
  std::vector<AllocationStats> out;
  out.push_back(allocation_stats("All", allocs));
  out.push_back(allocation_stats("Top 1%", top_fraction(allocs, 0.01)));
  out.push_back(allocation_stats("Top 5%", top_fraction(allocs, 0.05)));
  out.push_back(allocation_stats("Top 25%", top_fraction(allocs, 0.25)));
  out.push_back(allocation_stats("Bottom 25%", bottom_fraction(allocs, 0.25)));
  return out;
}

Table to_table(std::span<const AllocationStats> stats) {
  Table t({"group", "n_alloc", "n_unused", "utilization_pct", "total_awarded", "total_used",
           "mean", "median", "variance"});
  for (const auto& s : stats) {
    Cell util = s.utilization_pct ? Cell{*s.utilization_pct} : Cell{};
    t.add_row({s.group, static_cast<std::int64_t>(s.n_alloc), static_cast<std::int64_t>(s.n_unused),
               util, s.total_awarded, s.total_used, s.mean, s.median, s.variance});
  }
  return t;
}

}  // namespace hpcwl::metrics
