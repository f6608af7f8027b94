#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "edrought/calendar.hpp"

namespace edrought {

// (ny, nx) per-cell coordinates in degrees, row-major like the payload.
using CoordArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// (nt, ny*nx): one row per time step, each row a C-order flattened 2-D field.
template <typename Scalar>
using FieldStack = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Field2D = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One variable on one grid.
struct GridDataset {
  std::string variable;
  Calendar calendar = Calendar::Standard;
  std::vector<Date> dates;
  CoordArray lat2d;
  CoordArray lon2d;
  FieldStack<float> values;
  float fill_value = std::numeric_limits<float>::quiet_NaN();
  std::map<std::string, std::string> attrs;

  Eigen::Index nt() const { return static_cast<Eigen::Index>(dates.size()); }
  Eigen::Index ny() const { return lat2d.rows(); }
  Eigen::Index nx() const { return lat2d.cols(); }

  // Time step `t` viewed as an (ny, nx) field.
  Eigen::Map<const Field2D<float>> field(Eigen::Index t) const {
    return {values.row(t).data(), ny(), nx()};
  }
  Eigen::Map<Field2D<float>> field(Eigen::Index t) { return {values.row(t).data(), ny(), nx()}; }

  bool is_fill(float v) const {
    return std::isnan(fill_value) ? std::isnan(v) : v == fill_value;
  }
};

// Field-for-field equality with float payload and fill value compared by bit pattern.
bool bitwise_equal(const GridDataset& a, const GridDataset& b);

struct Violation {
  std::string invariant;
  std::string detail;  // includes the first offending index
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const GridDataset& ds);

// GSF1 container. Layout: "GSF1", uint64 LE metadata length, metadata JSON,
// int16 year/month/day (nt each), float64 lat2d/lon2d (ny*nx each),
// float32 values (nt*ny*nx). Little-endian throughout, no padding.
GridDataset read_dataset(const std::filesystem::path& path);
void write_dataset(const GridDataset& ds, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_dataset(const GridDataset& ds);
GridDataset decode_dataset(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

}  // namespace edrought
