#include "hpcwl/ingest/su.hpp"

#include <algorithm>

#include "hpcwl/core/errors.hpp"

namespace hpcwl {

const SuFactorWindow& factor_window(const ResourceSpec& resource, Date date) {
  const auto& ws = resource.su_factors;
  // Last window starting on or before the date.
  auto it = std::upper_bound(ws.begin(), ws.end(), date,
                             [](Date d, const SuFactorWindow& w) { return d < w.start; });
  if (it == ws.begin() || !std::prev(it)->covers(date))
    throw NoFactorForDate(resource.name, date.to_string());
  return *std::prev(it);
}

double su_factor(const ResourceSpec& resource, Date date) {
  return factor_window(resource, date).factor;
}

double su_convert(double amount, const ResourceSpec& resource, Date date, SuDirection direction) {
  double f = su_factor(resource, date);
  return direction == SuDirection::to_xd ? amount * f : amount / f;
}

double su_convert(double amount, const ResourceMap& resources, std::string_view resource,
                  Date date, SuDirection direction) {
  auto it = resources.find(resource);
  if (it == resources.end()) throw UnknownResource(std::string(resource));
  return su_convert(amount, it->second, date, direction);
}

double job_xd_su(const JobRecord& job, const ResourceMap& resources) {
  return su_convert(job.local_su_charged, resources, job.resource, Date::from_unix(job.end_time),
                    SuDirection::to_xd);
}

}  // namespace hpcwl
