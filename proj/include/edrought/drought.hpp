#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "edrought/error.hpp"
#include "edrought/geo.hpp"
#include "edrought/gridstore.hpp"
#include "edrought/series.hpp"

namespace edrought {

enum class Season { DJF = 0, MAM = 1, JJA = 2, SON = 3 };

inline constexpr std::array<Season, 4> kSeasons = {Season::DJF, Season::MAM, Season::JJA, Season::SON};

constexpr Season season_of(int month) {
  switch (month) {
    case 12: case 1: case 2: return Season::DJF;
    case 3: case 4: case 5: return Season::MAM;
    case 6: case 7: case 8: return Season::JJA;
    default: return Season::SON;
  }
}

std::string_view to_string(Season s);

struct SeasonCounts {
  std::array<long, 4> n{};

  long& operator[](Season s) { return n[static_cast<std::size_t>(s)]; }
  long operator[](Season s) const { return n[static_cast<std::size_t>(s)]; }
  long total() const { return n[0] + n[1] + n[2] + n[3]; }

  bool operator==(const SeasonCounts&) const = default;
};

enum class ThresholdScope { RegionMean, PerCell };

// Annual (all-days) thresholds of one dataset over one period. A threshold
// not used by the drought definition (single-variable runs) is NaN.
struct Threshold {
  double p_wind = std::numeric_limits<double>::quiet_NaN();
  double p_solar = std::numeric_limits<double>::quiet_NaN();
  double q = 0.2;
  int start_year = 0;
  int end_year = 0;
  ThresholdScope scope = ThresholdScope::RegionMean;
};

enum class DroughtKind { Compound, WindOnly, SolarOnly };

struct DroughtResult {
  DroughtKind kind = DroughtKind::Compound;
  std::vector<std::uint8_t> index;  // 1 = drought day
  std::vector<Date> dates;
  Threshold threshold;
  SeasonCounts seasonal_counts;

  long total() const { return seasonal_counts.total(); }
};

// Linear interpolation between order statistics at zero-based rank (n-1)*q.
// `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double q);

void check_quantile_level(double q);

template <typename Derived>
double percentile_threshold(const Eigen::DenseBase<Derived>& values, double q) {
  check_quantile_level(q);
  if (values.size() == 0) throw Error(ErrorKind::EmptySeries, "cannot take a quantile of an empty series");
  std::vector<double> sorted(static_cast<std::size_t>(values.size()));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double v = static_cast<double>(values(k));
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteValue, "value at index " + std::to_string(k) + " is not finite");
    sorted[static_cast<std::size_t>(k)] = v;
  }
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

Threshold compute_threshold(const SeriesWithDates& wind, const SeriesWithDates& solar, double q);

// d[t] = wind[t] <= p_wind && solar[t] <= p_solar.
DroughtResult drought_index(const SeriesWithDates& wind, const SeriesWithDates& solar, const Threshold& th);

// Thresholds from the series themselves, then the index.
DroughtResult compound_drought(const SeriesWithDates& wind, const SeriesWithDates& solar, double q);

SeasonCounts seasonal_counts(const DroughtResult& result);
SeasonCounts seasonal_counts(std::span<const std::uint8_t> index, std::span<const Date> dates);

enum class Variable { Wind, Solar };

std::string_view to_string(Variable v);
Variable parse_variable(std::string_view name);

DroughtResult single_variable_drought(const SeriesWithDates& series, double q, Variable which = Variable::Wind);

// Compound drought at one cell. Each variable's threshold uses that cell's
// non-fill days; the index covers days where both are non-fill.
DroughtResult cell_drought(const GridDataset& wind_ds, const GridDataset& solar_ds, Eigen::Index i, Eigen::Index j,
                           double q);

template <typename Scalar>
using ScalarGrid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SpatialDroughtMap {
  CoordArray lat2d;
  CoordArray lon2d;
  double q = 0.2;
  ScalarGrid<long> count;
  ScalarGrid<long> valid_days;  // days where both variables are non-fill
  ScalarGrid<double> p_wind;
  ScalarGrid<double> p_solar;
  ScalarGrid<double> cond_mean_wind;  // solar fill / wind fill where count == 0
  ScalarGrid<double> cond_mean_rsds;
  double wind_fill = std::numeric_limits<double>::quiet_NaN();
  double solar_fill = std::numeric_limits<double>::quiet_NaN();

  // count / valid_days, 0 where a cell has no valid days.
  ScalarGrid<double> fraction() const;
};

SpatialDroughtMap spatial_drought_map(const GridDataset& wind_ds, const GridDataset& solar_ds, double q);

// Throws GridMismatch / DateMismatch unless both datasets share grid and time axis.
void check_same_grid(const GridDataset& a, const GridDataset& b);

// Run-length encoding of a 0/1 index as (value, length) pairs.
std::vector<std::pair<std::uint8_t, long>> run_length_encode(std::span<const std::uint8_t> index);
std::vector<std::uint8_t> run_length_decode(std::span<const std::pair<std::uint8_t, long>> runs);

// JSON document: thresholds, run-length-encoded index, seasonal counts.
std::string drought_json(const DroughtResult& result);

// Flat per-cell CSV. When `mask` is given only masked-in cells are written.
void write_map_csv(std::ostream& os, const SpatialDroughtMap& map, const CellMask* mask = nullptr,
                   Eigen::Index row_offset = 0, Eigen::Index col_offset = 0);

}  // namespace edrought
