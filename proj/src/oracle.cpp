// Reference pipeline for tests. Deliberately written without any engine
// helper (no geo, no drought functions): plain loops and a full sort.
#include <algorithm>
#include <cmath>
#include <vector>

#include "edrought/synth.hpp"

namespace edrought::synth {

namespace {

bool missing(float v, float fill) {
  if (std::isnan(fill)) return std::isnan(v);
  return v == fill;
}

std::vector<double> naive_region_mean(const GridDataset& ds, const RegionBounds& b, Weighting weighting) {
  const Eigen::Index ny = ds.lat2d.rows();
  const Eigen::Index nx = ds.lat2d.cols();
  bool any_inside = false;
  for (Eigen::Index i = 0; i < ny; ++i) {
    for (Eigen::Index j = 0; j < nx; ++j) {
      const double lat = ds.lat2d(i, j), lon = ds.lon2d(i, j);
      if (lat >= b.lat_min && lat <= b.lat_max && lon >= b.lon_min && lon <= b.lon_max) any_inside = true;
    }
  }
  if (!any_inside) throw Error(ErrorKind::EmptyRegion, "oracle: no cell inside bounds");

  std::vector<double> out;
  for (std::size_t t = 0; t < ds.dates.size(); ++t) {
    double sum = 0.0, wsum = 0.0;
    for (Eigen::Index i = 0; i < ny; ++i) {
      for (Eigen::Index j = 0; j < nx; ++j) {
        const double lat = ds.lat2d(i, j), lon = ds.lon2d(i, j);
        if (!(lat >= b.lat_min && lat <= b.lat_max && lon >= b.lon_min && lon <= b.lon_max)) continue;
        const float v = ds.values(static_cast<Eigen::Index>(t), i * nx + j);
        if (missing(v, ds.fill_value)) continue;
        const double w = weighting == Weighting::CosLat ? std::cos(lat * 3.14159265358979323846 / 180.0) : 1.0;
        sum += w * v;
        wsum += w;
      }
    }
    if (wsum <= 0.0) throw Error(ErrorKind::AllCellsMissing, "oracle: all cells missing at time index " + std::to_string(t));
    out.push_back(sum / wsum);
  }
  return out;
}

double naive_quantile(std::vector<double> x, double q) {
  if (x.empty()) throw Error(ErrorKind::EmptySeries, "oracle: empty series");
  std::sort(x.begin(), x.end());
  const double h = (x.size() - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - lo) * (x[lo + 1] - x[lo]);
}

}  // namespace

OracleResult oracle(const GridDataset& wind, const GridDataset& solar, const RegionBounds& bounds, double q,
                    Weighting weighting) {
  if (wind.dates != solar.dates) throw Error(ErrorKind::DateMismatch, "oracle: time axes differ");
  const std::vector<double> w = naive_region_mean(wind, bounds, weighting);
  const std::vector<double> s = naive_region_mean(solar, bounds, weighting);
  OracleResult r;
  r.p_wind = naive_quantile(w, q);
  r.p_solar = naive_quantile(s, q);
  for (std::size_t t = 0; t < w.size(); ++t) {
    const bool flag = w[t] <= r.p_wind && s[t] <= r.p_solar;
    r.index.push_back(flag ? 1 : 0);
    if (flag) {
      const int m = wind.dates[t].month;
      if (m == 12 || m == 1 || m == 2) {
        ++r.counts.n[0];
      } else if (m >= 3 && m <= 5) {
        ++r.counts.n[1];
      } else if (m >= 6 && m <= 8) {
        ++r.counts.n[2];
      } else {
        ++r.counts.n[3];
      }
    }
  }
  return r;
}

SeasonCounts oracle_counts(const GridDataset& wind, const GridDataset& solar, const RegionBounds& bounds, double q) {
  return oracle(wind, solar, bounds, q).counts;
}

}  // namespace edrought::synth
