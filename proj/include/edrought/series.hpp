#pragma once

#include <vector>

#include <Eigen/Core>

#include "edrought/calendar.hpp"

namespace edrought {

// Daily scalar series (e.g. region-mean wind) with one date per value.
struct SeriesWithDates {
  Calendar calendar = Calendar::Standard;
  std::vector<Date> dates;
  Eigen::ArrayXd values;

  Eigen::Index size() const { return values.size(); }
};

}  // namespace edrought
