#include "edrought/geo.hpp"

#include <algorithm>
#include <limits>

namespace edrought {

void RegionBounds::check() const {
  const bool ok = std::isfinite(lon_min) && std::isfinite(lon_max) && std::isfinite(lat_min) &&
                  std::isfinite(lat_max) && lon_min < lon_max && lat_min < lat_max;
  if (!ok) {
    throw Error(ErrorKind::InvalidBounds, "bounds [" + std::to_string(lon_min) + "," + std::to_string(lon_max) +
                                              "]x[" + std::to_string(lat_min) + "," + std::to_string(lat_max) +
                                              "] are not a valid lon/lat box");
  }
}

std::string_view to_string(Weighting w) { return w == Weighting::CosLat ? "coslat" : "uniform"; }

Weighting parse_weighting(std::string_view name) {
  if (name == "uniform") return Weighting::Uniform;
  if (name == "coslat") return Weighting::CosLat;
  throw Error(ErrorKind::InvalidConfig, "unknown weighting '" + std::string(name) + "'");
}

CellMask region_mask(const CoordArray& lat2d, const CoordArray& lon2d, const RegionBounds& b) {
  CellMask mask;
  mask.inside.resize(lat2d.rows(), lat2d.cols());
  for (Eigen::Index i = 0; i < lat2d.rows(); ++i) {
    for (Eigen::Index j = 0; j < lat2d.cols(); ++j) {
      mask.inside(i, j) = b.contains(lat2d(i, j), lon2d(i, j));
    }
  }
  mask.count = mask.inside.count();
  return mask;
}

CellMask full_mask(Eigen::Index ny, Eigen::Index nx) {
  CellMask mask;
  mask.inside = BoolGrid::Constant(ny, nx, true);
  mask.count = ny * nx;
  return mask;
}

RegionSubset subset_region(const GridDataset& ds, const RegionBounds& b) {
  b.check();
  const CellMask full = region_mask(ds.lat2d, ds.lon2d, b);
  if (full.count == 0) throw Error(ErrorKind::EmptyRegion, "no cell center inside the requested bounds");

  Eigen::Index r0 = ds.ny(), r1 = -1, c0 = ds.nx(), c1 = -1;
  for (Eigen::Index i = 0; i < ds.ny(); ++i) {
    for (Eigen::Index j = 0; j < ds.nx(); ++j) {
      if (!full.inside(i, j)) continue;
      r0 = std::min(r0, i);
      r1 = std::max(r1, i);
      c0 = std::min(c0, j);
      c1 = std::max(c1, j);
    }
  }
  const Eigen::Index ny = r1 - r0 + 1;
  const Eigen::Index nx = c1 - c0 + 1;

  RegionSubset out;
  out.row_offset = r0;
  out.col_offset = c0;
  out.mask.inside = full.inside.block(r0, c0, ny, nx);
  out.mask.count = full.count;

  GridDataset& sub = out.dataset;
  sub.variable = ds.variable;
  sub.calendar = ds.calendar;
  sub.dates = ds.dates;
  sub.fill_value = ds.fill_value;
  sub.attrs = ds.attrs;
  sub.lat2d = ds.lat2d.block(r0, c0, ny, nx);
  sub.lon2d = ds.lon2d.block(r0, c0, ny, nx);
  sub.values.resize(ds.nt(), ny * nx);
  for (Eigen::Index t = 0; t < ds.nt(); ++t) {
    auto dst = sub.field(t);
    dst = ds.field(t).block(r0, c0, ny, nx);
    for (Eigen::Index i = 0; i < ny; ++i) {
      for (Eigen::Index j = 0; j < nx; ++j) {
        if (!out.mask.inside(i, j)) dst(i, j) = ds.fill_value;
      }
    }
  }
  return out;
}

SeriesWithDates region_series(const RegionSubset& subset, Weighting weighting) {
  const GridDataset& ds = subset.dataset;
  SeriesWithDates s;
  s.calendar = ds.calendar;
  s.dates = ds.dates;
  s.values.resize(ds.nt());
  for (Eigen::Index t = 0; t < ds.nt(); ++t) {
    try {
      s.values(t) = spatial_mean(ds.field(t), subset.mask, ds.lat2d, weighting, ds.fill_value);
    } catch (const Error& e) {
      throw Error(e.kind(), "time index " + std::to_string(t) + " (" + format_date(ds.dates[static_cast<std::size_t>(t)]) +
                                "): every masked-in cell is fill");
    }
  }
  return s;
}

SeriesWithDates daily_region_series(const GridDataset& ds, const RegionBounds& b, Weighting weighting) {
  return region_series(subset_region(ds, b), weighting);
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * kRad;
  const double dlon = (lon2 - lon1) * kRad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

NearestCell nearest_cell(const CoordArray& lat2d, const CoordArray& lon2d, double lon, double lat) {
  if (lat2d.size() == 0) throw Error(ErrorKind::PointOutsideGrid, "grid has no cells");
  NearestCell best;
  best.distance_km = std::numeric_limits<double>::infinity();
  double spacing = 0.0;
  for (Eigen::Index i = 0; i < lat2d.rows(); ++i) {
    for (Eigen::Index j = 0; j < lat2d.cols(); ++j) {
      const double d = great_circle_km(lat, lon, lat2d(i, j), lon2d(i, j));
      if (d < best.distance_km) best = {i, j, lat2d(i, j), lon2d(i, j), d};
      if (i + 1 < lat2d.rows()) {
        spacing = std::max(spacing, great_circle_km(lat2d(i, j), lon2d(i, j), lat2d(i + 1, j), lon2d(i + 1, j)));
      }
      if (j + 1 < lat2d.cols()) {
        spacing = std::max(spacing, great_circle_km(lat2d(i, j), lon2d(i, j), lat2d(i, j + 1), lon2d(i, j + 1)));
      }
    }
  }
  constexpr double kExactKm = 1e-6;
  if (best.distance_km > std::max(spacing, kExactKm)) {
    throw Error(ErrorKind::PointOutsideGrid, "point (" + std::to_string(lon) + "E, " + std::to_string(lat) +
                                                 "N) is " + std::to_string(best.distance_km) +
                                                 " km from the nearest cell center");
  }
  return best;
}

}  // namespace edrought
