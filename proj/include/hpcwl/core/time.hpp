#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hpcwl {

// Integer Unix seconds, UTC.
using UnixSeconds = std::int64_t;

inline constexpr UnixSeconds kSecondsPerDay = 86400;
inline constexpr double kHoursPerYear = 24.0 * 365.0;

/// Calendar date (UTC), parsed from and printed as ISO-8601 "YYYY-MM-DD".
class Date {
 public:
  constexpr Date() = default;
  explicit constexpr Date(std::chrono::sys_days days) : days_(days) {}
  Date(int year, unsigned month, unsigned day);

  static Date parse(std::string_view iso);
  static std::optional<Date> try_parse(std::string_view iso);
  static Date from_unix(UnixSeconds t);

  UnixSeconds to_unix() const;
  std::string to_string() const;
  int year() const;
  unsigned month() const;
  Date plus_days(int n) const { return Date(days_ + std::chrono::days(n)); }
  std::chrono::sys_days days() const { return days_; }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

enum class Period { quarter, year };

std::string_view to_string(Period p);
Period parse_period(std::string_view s);

// "2015-Q1" for quarters, "2015" for years; calendar periods in UTC.
std::string period_label(UnixSeconds t, Period p);
UnixSeconds period_start(UnixSeconds t, Period p);

}  // namespace hpcwl
