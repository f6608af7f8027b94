#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "edrought/geo.hpp"
#include "test_support.hpp"

using namespace edrought;
using edrought::testing::random_dataset;
using edrought::testing::regular_grid;

namespace {

// Global-ish regular 2.5 deg grid with centers at odd multiples of 1.25 deg.
GridDataset grid_2p5(Eigen::Index nt = 3) {
  GridDataset ds;
  ds.variable = "sfcWind";
  ds.dates = edrought::testing::consecutive_dates(Calendar::Standard, {2030, 1, 1}, static_cast<std::size_t>(nt));
  regular_grid(ds, 40, 60, 1.25, -41.25, 2.5, 2.5);
  ds.values = FieldStack<float>::Constant(nt, 40 * 60, 4.0f);
  for (Eigen::Index t = 0; t < nt; ++t) {
    for (Eigen::Index c = 0; c < ds.values.cols(); ++c) ds.values(t, c) = static_cast<float>((t * 7 + c) % 13);
  }
  return ds;
}

ErrorKind error_kind(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::IoFailure;
}

}  // namespace

TEST(SubsetRegion, MatchesExhaustiveCellCheckOnDefaultBounds) {
  const GridDataset ds = grid_2p5();
  const RegionBounds b = RegionBounds::central_europe();
  const RegionSubset sub = subset_region(ds, b);

  std::vector<std::pair<double, double>> expected;
  for (Eigen::Index i = 0; i < ds.ny(); ++i) {
    for (Eigen::Index j = 0; j < ds.nx(); ++j) {
      const double lat = ds.lat2d(i, j), lon = ds.lon2d(i, j);
      if (lon >= -4.90 && lon <= 19.18 && lat >= 40.44 && lat <= 55.97) expected.emplace_back(lat, lon);
    }
  }
  std::vector<std::pair<double, double>> got;
  for (Eigen::Index i = 0; i < sub.dataset.ny(); ++i) {
    for (Eigen::Index j = 0; j < sub.dataset.nx(); ++j) {
      if (sub.mask.inside(i, j)) got.emplace_back(sub.dataset.lat2d(i, j), sub.dataset.lon2d(i, j));
    }
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(sub.mask.count, static_cast<Eigen::Index>(expected.size()));
  // lon -3.75 .. 18.75 (10 columns), lat 41.25 .. 53.75 (6 rows)
  EXPECT_EQ(expected.size(), 60u);
}

TEST(SubsetRegion, OutsideMaskCellsBecomeFill) {
  GridDataset ds = random_dataset(7, "sfcWind", 4, 6, 6);
  // Curvilinear: shear the grid so the bounding box contains excluded cells.
  for (Eigen::Index i = 0; i < ds.ny(); ++i) {
    for (Eigen::Index j = 0; j < ds.nx(); ++j) ds.lon2d(i, j) += 0.6 * static_cast<double>(i);
  }
  const RegionBounds b{-3.0, 0.5, 40.5, 43.0};
  const RegionSubset sub = subset_region(ds, b);
  bool saw_excluded = false;
  for (Eigen::Index i = 0; i < sub.dataset.ny(); ++i) {
    for (Eigen::Index j = 0; j < sub.dataset.nx(); ++j) {
      const bool inside = b.contains(sub.dataset.lat2d(i, j), sub.dataset.lon2d(i, j));
      EXPECT_EQ(sub.mask.inside(i, j), inside);
      for (Eigen::Index t = 0; t < ds.nt(); ++t) {
        const float v = sub.dataset.field(t)(i, j);
        if (inside) {
          EXPECT_EQ(v, ds.field(t)(i + sub.row_offset, j + sub.col_offset));
        } else {
          saw_excluded = true;
          EXPECT_TRUE(sub.dataset.is_fill(v));
        }
      }
    }
  }
  EXPECT_TRUE(saw_excluded);
  EXPECT_TRUE(validate(sub.dataset).ok());
}

TEST(SubsetRegion, WholeGridBoundsLeaveDatasetUnchanged) {
  const GridDataset ds = random_dataset(8, "rsds", 5, 4, 3);
  const RegionSubset sub = subset_region(ds, {-180.0, 179.9, -90.0, 90.0});
  EXPECT_TRUE(sub.mask.inside.all());
  EXPECT_EQ(sub.mask.count, 12);
  EXPECT_TRUE(bitwise_equal(sub.dataset, ds));
}

TEST(SubsetRegion, DisjointBoundsAreEmptyRegion) {
  const GridDataset ds = grid_2p5();
  EXPECT_EQ(error_kind([&] { subset_region(ds, {200, 210, 0, 1}); }), ErrorKind::EmptyRegion);
  EXPECT_EQ(error_kind([&] { subset_region(ds, {10, 5, 0, 1}); }), ErrorKind::InvalidBounds);
}

TEST(SubsetRegion, IdempotentOnValues) {
  for (std::uint32_t seed = 1; seed <= 10; ++seed) {
    GridDataset ds = random_dataset(seed, "sfcWind", 3, 7, 9);
    for (Eigen::Index i = 0; i < ds.ny(); ++i) {
      for (Eigen::Index j = 0; j < ds.nx(); ++j) ds.lon2d(i, j) += 0.3 * static_cast<double>(i);
    }
    const RegionBounds b{-3.5, 2.0, 41.0, 44.0};
    const RegionSubset once = subset_region(ds, b);
    const RegionSubset twice = subset_region(once.dataset, b);
    EXPECT_TRUE(bitwise_equal(once.dataset, twice.dataset)) << "seed " << seed;
  }
}

TEST(SpatialMean, ConstantFieldAnyWeighting) {
  const CoordArray lat = CoordArray::Constant(3, 4, 50.0) + CoordArray::Random(3, 4);
  const Field2D<float> field = Field2D<float>::Constant(3, 4, 2.5f);
  CellMask mask = full_mask(3, 4);
  mask.inside(1, 1) = false;
  for (Weighting w : {Weighting::Uniform, Weighting::CosLat}) {
    EXPECT_DOUBLE_EQ(spatial_mean(field, mask, lat, w, std::nanf("")), 2.5);
  }
}

TEST(SpatialMean, TwoCells) {
  Field2D<float> field(1, 2);
  field << 2.0f, 4.0f;
  CoordArray lat(1, 2);
  lat << 0.0, 60.0;
  const CellMask mask = full_mask(1, 2);
  EXPECT_DOUBLE_EQ(spatial_mean(field, mask, lat, Weighting::Uniform, -999.0f), 3.0);
  // (2*1 + 4*0.5) / 1.5
  EXPECT_NEAR(spatial_mean(field, mask, lat, Weighting::CosLat, -999.0f), 2.6666666666666667, 1e-12);
}

TEST(SpatialMean, SkipsFillAndMaskedCells) {
  Field2D<double> field(2, 2);
  field << 1.0, -999.0, 5.0, 100.0;
  CellMask mask = full_mask(2, 2);
  mask.inside(1, 1) = false;
  EXPECT_DOUBLE_EQ(spatial_mean(field, mask, CoordArray::Zero(2, 2), Weighting::Uniform, -999.0), 3.0);
}

TEST(SpatialMean, AllMissingThrows) {
  const Field2D<float> field = Field2D<float>::Constant(2, 2, std::nanf(""));
  EXPECT_EQ(error_kind([&] { spatial_mean(field, full_mask(2, 2), CoordArray::Zero(2, 2), Weighting::Uniform, std::nanf("")); }),
            ErrorKind::AllCellsMissing);
}

TEST(SpatialMean, BoundedByFieldExtremes) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> u(-5.0f, 30.0f);
  std::bernoulli_distribution keep(0.7);
  for (int trial = 0; trial < 200; ++trial) {
    Field2D<float> field(5, 6);
    CoordArray lat(5, 6);
    CellMask mask = full_mask(5, 6);
    for (Eigen::Index k = 0; k < field.size(); ++k) {
      field.data()[k] = u(rng);
      lat.data()[k] = std::uniform_real_distribution<double>(-80, 80)(rng);
      mask.inside.data()[k] = keep(rng);
    }
    mask.inside(0, 0) = true;
    double lo = 1e30, hi = -1e30;
    for (Eigen::Index k = 0; k < field.size(); ++k) {
      if (!mask.inside.data()[k]) continue;
      lo = std::min(lo, static_cast<double>(field.data()[k]));
      hi = std::max(hi, static_cast<double>(field.data()[k]));
    }
    for (Weighting w : {Weighting::Uniform, Weighting::CosLat}) {
      const double m = spatial_mean(field, mask, lat, w, std::nanf(""));
      EXPECT_GE(m, lo - 1e-9);
      EXPECT_LE(m, hi + 1e-9);
    }
  }
}

TEST(SpatialMean, InvariantUnderCellPermutation) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    Field2D<float> field(4, 5);
    CoordArray lat(4, 5);
    for (Eigen::Index k = 0; k < field.size(); ++k) {
      field.data()[k] = std::uniform_real_distribution<float>(0, 20)(rng);
      lat.data()[k] = std::uniform_real_distribution<double>(30, 70)(rng);
    }
    std::vector<Eigen::Index> perm(20);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Field2D<float> pf(4, 5);
    CoordArray plat(4, 5);
    for (Eigen::Index k = 0; k < 20; ++k) {
      pf.data()[perm[static_cast<std::size_t>(k)]] = field.data()[k];
      plat.data()[perm[static_cast<std::size_t>(k)]] = lat.data()[k];
    }
    for (Weighting w : {Weighting::Uniform, Weighting::CosLat}) {
      EXPECT_NEAR(spatial_mean(field, full_mask(4, 5), lat, w, -1.0f), spatial_mean(pf, full_mask(4, 5), plat, w, -1.0f),
                  1e-12);
    }
  }
}

TEST(DailyRegionSeries, ConstantInSpace) {
  GridDataset ds = edrought::testing::small_dataset("sfcWind", 3, 2, 2);
  for (Eigen::Index t = 0; t < 3; ++t) ds.values.row(t).setConstant(static_cast<float>(t + 1));
  const SeriesWithDates s = daily_region_series(ds, {-180, 179, -90, 90});
  ASSERT_EQ(s.size(), 3);
  EXPECT_EQ(s.values(0), 1.0);
  EXPECT_EQ(s.values(1), 2.0);
  EXPECT_EQ(s.values(2), 3.0);
  EXPECT_EQ(s.dates, ds.dates);
}

TEST(DailyRegionSeries, FullyFillTimestepNamesIndex) {
  GridDataset ds = edrought::testing::small_dataset("sfcWind", 3, 2, 2);
  ds.values.row(1).setConstant(ds.fill_value);
  try {
    daily_region_series(ds, {-180, 179, -90, 90});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AllCellsMissing);
    EXPECT_NE(std::string(e.what()).find("time index 1"), std::string::npos);
  }
}

TEST(DailyRegionSeries, MatchesNaiveDoubleLoop) {
  for (std::uint32_t seed = 1; seed <= 5; ++seed) {
    GridDataset ds = random_dataset(seed, "rsds", 30, 8, 9);
    for (Eigen::Index k = 0; k < ds.values.size(); k += 7) ds.values.data()[k] = ds.fill_value;
    const RegionBounds b{-3.0, 1.5, 41.0, 44.5};
    for (Weighting w : {Weighting::Uniform, Weighting::CosLat}) {
      const SeriesWithDates s = daily_region_series(ds, b, w);
      for (Eigen::Index t = 0; t < ds.nt(); ++t) {
        long double num = 0, den = 0;
        for (Eigen::Index c = ds.values.cols() - 1; c >= 0; --c) {  // reverse order on purpose
          const double lat = ds.lat2d.data()[c], lon = ds.lon2d.data()[c];
          const float v = ds.values(t, c);
          if (std::isnan(v) || !(lat >= 41.0 && lat <= 44.5 && lon >= -3.0 && lon <= 1.5)) continue;
          const long double wt = w == Weighting::CosLat ? std::cos(lat * M_PI / 180.0) : 1.0;
          num += wt * v;
          den += wt;
        }
        const double expected = static_cast<double>(num / den);
        EXPECT_NEAR(s.values(t), expected, 1e-6 * std::abs(expected)) << "t=" << t;
      }
    }
  }
}

TEST(NearestCell, ExactCenter) {
  GridDataset ds;
  regular_grid(ds, 5, 6, 41.25, -3.75, 2.5, 2.5);
  const NearestCell c = nearest_cell(ds.lat2d, ds.lon2d, ds.lon2d(2, 3), ds.lat2d(2, 3));
  EXPECT_EQ(c.i, 2);
  EXPECT_EQ(c.j, 3);
  EXPECT_NEAR(c.distance_km, 0.0, 1e-9);
}

TEST(NearestCell, SingleLocationOnGcmGrid) {
  GridDataset ds;
  regular_grid(ds, 6, 10, 41.25, -3.75, 2.5, 2.5);
  const NearestCell c = nearest_cell(ds.lat2d, ds.lon2d, 6.55, 46.90);
  EXPECT_DOUBLE_EQ(c.lon, 6.25);
  EXPECT_DOUBLE_EQ(c.lat, 46.25);
}

TEST(NearestCell, FarPointIsOutsideGrid) {
  GridDataset ds;
  regular_grid(ds, 6, 10, 41.25, -3.75, 2.5, 2.5);
  EXPECT_EQ(error_kind([&] { nearest_cell(ds.lat2d, ds.lon2d, 0.0, -89.0); }), ErrorKind::PointOutsideGrid);
  // Just beyond the last column but within one spacing: still snaps to the edge.
  EXPECT_NO_THROW(nearest_cell(ds.lat2d, ds.lon2d, ds.lon2d(0, 9) + 1.0, ds.lat2d(0, 9)));
}
