#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "edrought/error.hpp"
#include "edrought/gridstore.hpp"
#include "edrought/series.hpp"

namespace edrought {

struct RegionBounds {
  double lon_min = 0.0;
  double lon_max = 0.0;
  double lat_min = 0.0;
  double lat_max = 0.0;

  // [-4.90, 19.18] x [40.44, 55.97]
  static RegionBounds central_europe() { return {-4.90, 19.18, 40.44, 55.97}; }

  // Throws InvalidBounds unless finite with min < max on both axes. A box
  // outside [-180,180) x [-90,90] is accepted and simply selects no cell.
  void check() const;

  // Boundary-inclusive on cell-center coordinates.
  bool contains(double lat, double lon) const {
    return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
  }
};

using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct CellMask {
  BoolGrid inside;
  Eigen::Index count = 0;
};

enum class Weighting { Uniform, CosLat };

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

CellMask region_mask(const CoordArray& lat2d, const CoordArray& lon2d, const RegionBounds& b);

// Mask covering every cell of an (ny, nx) grid.
CellMask full_mask(Eigen::Index ny, Eigen::Index nx);

struct RegionSubset {
  GridDataset dataset;  // minimal bounding index box; outside-mask cells set to fill
  CellMask mask;        // same shape as dataset's grid
  Eigen::Index row_offset = 0;
  Eigen::Index col_offset = 0;
};

RegionSubset subset_region(const GridDataset& ds, const RegionBounds& b);

// Mean over masked-in, non-fill cells, accumulated in double in row-major
// order. CosLat weights each cell by cos(lat).
template <typename Derived>
double spatial_mean(const Eigen::DenseBase<Derived>& field, const CellMask& mask, const CoordArray& lat2d,
                    Weighting weighting, typename Derived::Scalar fill) {
  using Scalar = typename Derived::Scalar;
  const bool nan_fill = std::isnan(static_cast<double>(fill));
  double sum = 0.0;
  double weight_sum = 0.0;
  for (Eigen::Index i = 0; i < field.rows(); ++i) {
    for (Eigen::Index j = 0; j < field.cols(); ++j) {
      if (!mask.inside(i, j)) continue;
      const Scalar v = field(i, j);
      if (nan_fill ? std::isnan(static_cast<double>(v)) : v == fill) continue;
      const double w =
          weighting == Weighting::CosLat ? std::cos(lat2d(i, j) * std::numbers::pi / 180.0) : 1.0;
      sum += w * static_cast<double>(v);
      weight_sum += w;
    }
  }
  if (weight_sum <= 0.0) throw Error(ErrorKind::AllCellsMissing, "no masked-in non-fill cell");
  return sum / weight_sum;
}

// Region-mean series over the time axis; dates copied through.
SeriesWithDates daily_region_series(const GridDataset& ds, const RegionBounds& b,
                                    Weighting weighting = Weighting::Uniform);
SeriesWithDates region_series(const RegionSubset& subset, Weighting weighting = Weighting::Uniform);

double great_circle_km(double lat1, double lon1, double lat2, double lon2);

struct NearestCell {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double lat = 0.0;
  double lon = 0.0;
  double distance_km = 0.0;
};

// Nearest cell center by great-circle distance. Throws PointOutsideGrid when
// the point lies farther from every center than the grid's largest
// neighbour spacing.
NearestCell nearest_cell(const CoordArray& lat2d, const CoordArray& lon2d, double lon, double lat);

}  // namespace edrought
