#include "edrought/derive.hpp"

#include <cmath>
#include <string>

#include "edrought/error.hpp"

namespace edrought {

namespace {

void check_shape(const SubDailySeries& s, const char* name) {
  if (s.dates.size() != s.hours.size() || static_cast<Eigen::Index>(s.dates.size()) != s.values.size()) {
    throw Error(ErrorKind::DateMismatch, std::string(name) + ": dates, hours and values differ in length");
  }
}

}  // namespace

double wind_speed(double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v)) {
    throw Error(ErrorKind::NonFiniteInput, "wind component is not finite");
  }
  return std::hypot(u, v);
}

SubDailySeries wind_speed(const HourlySeriesPair& components) {
  const auto& u = components.u;
  const auto& v = components.v;
  check_shape(u, "u");
  check_shape(v, "v");
  if (u.calendar != v.calendar || u.dates != v.dates || u.hours != v.hours) {
    throw Error(ErrorKind::DateMismatch, "u and v timestamps differ");
  }
  SubDailySeries out;
  out.calendar = u.calendar;
  out.dates = u.dates;
  out.hours = u.hours;
  out.values = wind_speed(u.values, v.values);
  return out;
}

SeriesWithDates daily_mean(const SubDailySeries& series, DayPolicy policy, int records_per_day) {
  check_shape(series, "series");
  if (series.dates.empty()) throw Error(ErrorKind::EmptySeries, "no sub-daily records");
  if (records_per_day < 1) throw Error(ErrorKind::InvalidConfig, "records_per_day must be positive");

  std::vector<double> means;
  SeriesWithDates out;
  out.calendar = series.calendar;

  std::size_t k = 0;
  while (k < series.dates.size()) {
    const Date day = series.dates[k];
    if (!is_valid(series.calendar, day)) {
      throw Error(ErrorKind::InvalidCalendarDate, format_date(day) + " not in " +
                                                      std::string(to_string(series.calendar)) + " calendar");
    }
    double sum = 0.0;
    int n = 0;
    int last_hour = -1;
    for (; k < series.dates.size() && series.dates[k] == day; ++k) {
      const int hour = series.hours[k];
      if (hour < 0 || hour > 23) throw Error(ErrorKind::InvalidConfig, "hour " + std::to_string(hour) + " outside 0-23");
      if (hour <= last_hour) {
        throw Error(ErrorKind::NonMonotonicTime, format_date(day) + " hour " + std::to_string(hour) +
                                                     " is duplicated or out of order");
      }
      last_hour = hour;
      sum += series.values(static_cast<Eigen::Index>(k));
      ++n;
    }
    if (k < series.dates.size() && series.dates[k] < day) {
      throw Error(ErrorKind::NonMonotonicTime, format_date(series.dates[k]) + " follows " + format_date(day));
    }
    if (policy == DayPolicy::RequireComplete && n != records_per_day) {
      throw Error(ErrorKind::IncompleteDay, format_date(day) + " has " + std::to_string(n) + " of " +
                                                std::to_string(records_per_day) + " records");
    }
    out.dates.push_back(day);
    means.push_back(sum / n);
  }
  out.values = Eigen::Map<const Eigen::ArrayXd>(means.data(), static_cast<Eigen::Index>(means.size()));
  return out;
}

}  // namespace edrought
