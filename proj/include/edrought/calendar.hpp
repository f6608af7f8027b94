#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace edrought {

enum class Calendar { Standard, NoLeap, Day360 };

// CF calendar attribute spelling: "standard", "noleap", "360_day".
std::string_view to_string(Calendar cal);
Calendar parse_calendar(std::string_view name);

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;
};

bool is_leap_year(int year);
int days_in_month(Calendar cal, int year, int month);
int days_in_year(Calendar cal, int year);
bool is_valid(Calendar cal, const Date& d);

// 1-based ordinal day within the year under `cal`.
int day_of_year(Calendar cal, const Date& d);

Date next_day(Calendar cal, const Date& d);

// ISO-like "YYYY-MM-DD"; valid for any calendar since dates are stored as triples.
std::string format_date(const Date& d);

}  // namespace edrought
