#include "edrought/calendar.hpp"

#include <array>
#include <cstdio>

#include "edrought/error.hpp"

namespace edrought {

std::string_view to_string(Calendar cal) {
  switch (cal) {
    case Calendar::Standard: return "standard";
    case Calendar::NoLeap: return "noleap";
    case Calendar::Day360: return "360_day";
  }
  return "standard";
}

Calendar parse_calendar(std::string_view name) {
  if (name == "standard" || name == "gregorian" || name == "proleptic_gregorian") {
    return Calendar::Standard;
  }
  if (name == "noleap" || name == "365_day") return Calendar::NoLeap;
  if (name == "360_day") return Calendar::Day360;
  throw Error(ErrorKind::InvalidDataset, "unknown calendar '" + std::string(name) + "'");
}

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(Calendar cal, int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  switch (cal) {
    case Calendar::Day360: return 30;
    case Calendar::NoLeap: return kDays[month - 1];
    case Calendar::Standard:
      return (month == 2 && is_leap_year(year)) ? 29 : kDays[month - 1];
  }
  return 0;
}

int days_in_year(Calendar cal, int year) {
  switch (cal) {
    case Calendar::Day360: return 360;
    case Calendar::NoLeap: return 365;
    case Calendar::Standard: return is_leap_year(year) ? 366 : 365;
  }
  return 365;
}

bool is_valid(Calendar cal, const Date& d) {
  return d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= days_in_month(cal, d.year, d.month);
}

int day_of_year(Calendar cal, const Date& d) {
  int doy = d.day;
  for (int m = 1; m < d.month; ++m) doy += days_in_month(cal, d.year, m);
  return doy;
}

Date next_day(Calendar cal, const Date& d) {
  Date n = d;
  if (++n.day > days_in_month(cal, n.year, n.month)) {
    n.day = 1;
    if (++n.month > 12) {
      n.month = 1;
      ++n.year;
    }
  }
  return n;
}

std::string format_date(const Date& d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

}  // namespace edrought
