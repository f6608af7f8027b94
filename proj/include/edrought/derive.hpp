#pragma once

#include <vector>

#include <Eigen/Core>

#include "edrought/calendar.hpp"
#include "edrought/series.hpp"

namespace edrought {

// Sub-daily records, each stamped with a calendar date and hour of day (0-23).
struct SubDailySeries {
  Calendar calendar = Calendar::Standard;
  std::vector<Date> dates;
  std::vector<int> hours;
  Eigen::ArrayXd values;
};

struct HourlySeriesPair {
  SubDailySeries u;
  SubDailySeries v;
};

// sqrt(u^2 + v^2); throws NonFiniteInput on NaN/inf components.
double wind_speed(double u, double v);

template <typename DerivedU, typename DerivedV>
Eigen::ArrayXd wind_speed(const Eigen::ArrayBase<DerivedU>& u, const Eigen::ArrayBase<DerivedV>& v) {
  Eigen::ArrayXd out(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) out(k) = wind_speed(u(k), v(k));
  return out;
}

// Speed per record, computed before any temporal averaging.
SubDailySeries wind_speed(const HourlySeriesPair& components);

enum class DayPolicy { RequireComplete, AllowPartial };

// Arithmetic mean of each calendar day's records. Under RequireComplete a
// day must carry exactly `records_per_day` records (24 hourly, 4 six-hourly).
SeriesWithDates daily_mean(const SubDailySeries& series, DayPolicy policy, int records_per_day = 24);

}  // namespace edrought
