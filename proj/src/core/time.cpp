#include "hpcwl/core/time.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace hpcwl {

namespace chr = std::chrono;

namespace {

bool parse_uint(std::string_view s, unsigned& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

chr::sys_days floor_days(UnixSeconds t) {
  return chr::floor<chr::days>(chr::sys_seconds(chr::seconds(t)));
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  chr::year_month_day ymd{chr::year(year), chr::month(month), chr::day(day)};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  days_ = chr::sys_days(ymd);
}

std::optional<Date> Date::try_parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  unsigned y = 0, m = 0, d = 0;
  if (!parse_uint(iso.substr(0, 4), y) || !parse_uint(iso.substr(5, 2), m) ||
      !parse_uint(iso.substr(8, 2), d))
    return std::nullopt;
  chr::year_month_day ymd{chr::year(static_cast<int>(y)), chr::month(m), chr::day(d)};
  if (!ymd.ok()) return std::nullopt;
  return Date(chr::sys_days(ymd));
}

Date Date::parse(std::string_view iso) {
  auto d = try_parse(iso);
  if (!d) throw std::invalid_argument("not an ISO-8601 date: '" + std::string(iso) + "'");
  return *d;
}

Date Date::from_unix(UnixSeconds t) { return Date(floor_days(t)); }

UnixSeconds Date::to_unix() const {
  return chr::duration_cast<chr::seconds>(days_.time_since_epoch()).count();
}

std::string Date::to_string() const {
  chr::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int Date::year() const { return static_cast<int>(chr::year_month_day{days_}.year()); }

unsigned Date::month() const {
  return static_cast<unsigned>(chr::year_month_day{days_}.month());
}

std::string_view to_string(Period p) { return p == Period::quarter ? "quarter" : "year"; }

Period parse_period(std::string_view s) {
  if (s == "quarter") return Period::quarter;
  if (s == "year") return Period::year;
  throw std::invalid_argument("unknown period '" + std::string(s) + "'");
}

std::string period_label(UnixSeconds t, Period p) {
  Date d = Date::from_unix(t);
  std::string label = std::to_string(d.year());
  if (p == Period::quarter) label += "-Q" + std::to_string((d.month() - 1) / 3 + 1);
  return label;
}

UnixSeconds period_start(UnixSeconds t, Period p) {
  Date d = Date::from_unix(t);
  unsigned month = p == Period::quarter ? ((d.month() - 1) / 3) * 3 + 1 : 1;
  return Date(d.year(), month, 1).to_unix();
}

}  // namespace hpcwl
