#pragma once

#include <string_view>

#include "hpcwl/ingest/types.hpp"

namespace hpcwl {

enum class SuDirection { to_xd, from_xd };

// Window lookup is closed-open, so a boundary date resolves to the window starting on it.
// Throws NoFactorForDate when no window covers the date.
const SuFactorWindow& factor_window(const ResourceSpec& resource, Date date);
double su_factor(const ResourceSpec& resource, Date date);

// For node-hour resources the amount is in node-hours; the factor applies unchanged.
double su_convert(double amount, const ResourceSpec& resource, Date date, SuDirection direction);
double su_convert(double amount, const ResourceMap& resources, std::string_view resource,
                  Date date, SuDirection direction);

// XD SUs booked for a job: its local charge converted at the end_time date.
double job_xd_su(const JobRecord& job, const ResourceMap& resources);

}  // namespace hpcwl
