#include "edrought/drought.hpp"

#include <sstream>

#include "edrought/detail/format.hpp"
#include "json.hpp"

namespace edrought {

namespace {

void check_aligned(const SeriesWithDates& a, const SeriesWithDates& b) {
  if (a.size() != b.size() || static_cast<std::size_t>(a.size()) != a.dates.size()) {
    throw Error(ErrorKind::DateMismatch, "series lengths differ (" + std::to_string(a.size()) + " vs " +
                                             std::to_string(b.size()) + ")");
  }
  if (b.dates.size() != a.dates.size()) throw Error(ErrorKind::DateMismatch, "series lengths differ");
  for (std::size_t t = 0; t < a.dates.size(); ++t) {
    if (a.dates[t] != b.dates[t]) {
      throw Error(ErrorKind::DateMismatch, "index " + std::to_string(t) + ": " + format_date(a.dates[t]) +
                                               " vs " + format_date(b.dates[t]));
    }
  }
}

std::pair<int, int> period_of(const std::vector<Date>& dates) {
  if (dates.empty()) return {0, 0};
  return {dates.front().year, dates.back().year};
}

}  // namespace

std::string_view to_string(Season s) {
  switch (s) {
    case Season::DJF: return "DJF";
    case Season::MAM: return "MAM";
    case Season::JJA: return "JJA";
    case Season::SON: return "SON";
  }
  return "DJF";
}

std::string_view to_string(Variable v) { return v == Variable::Wind ? "sfcWind" : "rsds"; }

Variable parse_variable(std::string_view name) {
  if (name == "sfcWind" || name == "wind") return Variable::Wind;
  if (name == "rsds" || name == "solar") return Variable::Solar;
  throw Error(ErrorKind::InvalidConfig, "unknown variable '" + std::string(name) + "'");
}

void check_quantile_level(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorKind::InvalidQuantile, "quantile level " + std::to_string(q) + " outside [0, 1]");
  }
}

double quantile_sorted(std::span<const double> sorted, double q) {
  check_quantile_level(q);
  if (sorted.empty()) throw Error(ErrorKind::EmptySeries, "cannot take a quantile of an empty series");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return std::lerp(sorted[lo], sorted[hi], frac);
}

Threshold compute_threshold(const SeriesWithDates& wind, const SeriesWithDates& solar, double q) {
  check_aligned(wind, solar);
  Threshold th;
  th.q = q;
  th.p_wind = percentile_threshold(wind.values, q);
  th.p_solar = percentile_threshold(solar.values, q);
  std::tie(th.start_year, th.end_year) = period_of(wind.dates);
  th.scope = ThresholdScope::RegionMean;
  return th;
}

DroughtResult drought_index(const SeriesWithDates& wind, const SeriesWithDates& solar, const Threshold& th) {
  check_aligned(wind, solar);
  DroughtResult r;
  r.kind = DroughtKind::Compound;
  r.dates = wind.dates;
  r.threshold = th;
  r.index.resize(wind.dates.size());
  for (Eigen::Index t = 0; t < wind.size(); ++t) {
    r.index[static_cast<std::size_t>(t)] = (wind.values(t) <= th.p_wind && solar.values(t) <= th.p_solar) ? 1 : 0;
  }
  r.seasonal_counts = seasonal_counts(r);
  return r;
}

DroughtResult compound_drought(const SeriesWithDates& wind, const SeriesWithDates& solar, double q) {
  return drought_index(wind, solar, compute_threshold(wind, solar, q));
}

SeasonCounts seasonal_counts(std::span<const std::uint8_t> index, std::span<const Date> dates) {
  SeasonCounts c;
  for (std::size_t t = 0; t < index.size(); ++t) {
    if (index[t]) ++c[season_of(dates[t].month)];
  }
  return c;
}

SeasonCounts seasonal_counts(const DroughtResult& result) {
  return seasonal_counts(result.index, result.dates);
}

DroughtResult single_variable_drought(const SeriesWithDates& series, double q, Variable which) {
  if (static_cast<std::size_t>(series.size()) != series.dates.size()) {
    throw Error(ErrorKind::DateMismatch, "values and dates differ in length");
  }
  const double p = percentile_threshold(series.values, q);
  DroughtResult r;
  r.kind = which == Variable::Wind ? DroughtKind::WindOnly : DroughtKind::SolarOnly;
  r.dates = series.dates;
  r.threshold.q = q;
  (which == Variable::Wind ? r.threshold.p_wind : r.threshold.p_solar) = p;
  std::tie(r.threshold.start_year, r.threshold.end_year) = period_of(series.dates);
  r.index.resize(series.dates.size());
  for (Eigen::Index t = 0; t < series.size(); ++t) r.index[static_cast<std::size_t>(t)] = series.values(t) <= p ? 1 : 0;
  r.seasonal_counts = seasonal_counts(r);
  return r;
}

void check_same_grid(const GridDataset& a, const GridDataset& b) {
  if (a.ny() != b.ny() || a.nx() != b.nx() || !(a.lat2d == b.lat2d).all() || !(a.lon2d == b.lon2d).all()) {
    throw Error(ErrorKind::GridMismatch, a.variable + " and " + b.variable + " are on different grids");
  }
  if (a.calendar != b.calendar || a.dates != b.dates) {
    throw Error(ErrorKind::DateMismatch, a.variable + " and " + b.variable + " have different time axes");
  }
}

namespace {

struct CellOutcome {
  bool has_wind = false;
  bool has_solar = false;
  double p_wind = std::numeric_limits<double>::quiet_NaN();
  double p_solar = std::numeric_limits<double>::quiet_NaN();
  std::vector<Date> dates;
  std::vector<std::uint8_t> index;
  long count = 0;
  double wind_sum = 0.0;
  double solar_sum = 0.0;
};

CellOutcome analyse_cell(const GridDataset& wind_ds, const GridDataset& solar_ds, Eigen::Index i, Eigen::Index j,
                         double q, std::vector<double>& scratch) {
  CellOutcome out;
  const Eigen::Index c = i * wind_ds.nx() + j;

  auto cell_threshold = [&](const GridDataset& ds, bool& has, double& p) {
    scratch.clear();
    for (Eigen::Index t = 0; t < ds.nt(); ++t) {
      const float v = ds.values(t, c);
      if (!ds.is_fill(v)) scratch.push_back(v);
    }
    has = !scratch.empty();
    if (has) {
      std::sort(scratch.begin(), scratch.end());
      p = quantile_sorted(scratch, q);
    }
  };
  cell_threshold(wind_ds, out.has_wind, out.p_wind);
  cell_threshold(solar_ds, out.has_solar, out.p_solar);

  for (Eigen::Index t = 0; t < wind_ds.nt(); ++t) {
    const float w = wind_ds.values(t, c);
    const float s = solar_ds.values(t, c);
    if (wind_ds.is_fill(w) || solar_ds.is_fill(s)) continue;
    const bool flagged = w <= out.p_wind && s <= out.p_solar;
    out.dates.push_back(wind_ds.dates[static_cast<std::size_t>(t)]);
    out.index.push_back(flagged ? 1 : 0);
    if (flagged) {
      ++out.count;
      out.wind_sum += w;
      out.solar_sum += s;
    }
  }
  return out;
}

}  // namespace

DroughtResult cell_drought(const GridDataset& wind_ds, const GridDataset& solar_ds, Eigen::Index i, Eigen::Index j,
                           double q) {
  check_same_grid(wind_ds, solar_ds);
  check_quantile_level(q);
  if (i < 0 || j < 0 || i >= wind_ds.ny() || j >= wind_ds.nx()) {
    throw Error(ErrorKind::GridMismatch, "cell index outside grid");
  }
  std::vector<double> scratch;
  CellOutcome cell = analyse_cell(wind_ds, solar_ds, i, j, q, scratch);
  if (!cell.has_wind || !cell.has_solar || cell.dates.empty()) {
    throw Error(ErrorKind::AllCellsMissing, "cell (" + std::to_string(i) + "," + std::to_string(j) +
                                                ") has no day with both variables present");
  }
  DroughtResult r;
  r.kind = DroughtKind::Compound;
  r.threshold.p_wind = cell.p_wind;
  r.threshold.p_solar = cell.p_solar;
  r.threshold.q = q;
  r.threshold.scope = ThresholdScope::PerCell;
  std::tie(r.threshold.start_year, r.threshold.end_year) = period_of(wind_ds.dates);
  r.dates = std::move(cell.dates);
  r.index = std::move(cell.index);
  r.seasonal_counts = seasonal_counts(r);
  return r;
}


ScalarGrid<double> SpatialDroughtMap::fraction() const {
  ScalarGrid<double> f(count.rows(), count.cols());
  for (Eigen::Index k = 0; k < count.size(); ++k) {
    f.data()[k] = valid_days.data()[k] > 0
                      ? static_cast<double>(count.data()[k]) / static_cast<double>(valid_days.data()[k])
                      : 0.0;
  }
  return f;
}

SpatialDroughtMap spatial_drought_map(const GridDataset& wind_ds, const GridDataset& solar_ds, double q) {
  check_same_grid(wind_ds, solar_ds);
  check_quantile_level(q);
  const Eigen::Index ny = wind_ds.ny(), nx = wind_ds.nx();
  SpatialDroughtMap m;
  m.lat2d = wind_ds.lat2d;
  m.lon2d = wind_ds.lon2d;
  m.q = q;
  m.wind_fill = wind_ds.fill_value;
  m.solar_fill = solar_ds.fill_value;
  m.count = ScalarGrid<long>::Zero(ny, nx);
  m.valid_days = ScalarGrid<long>::Zero(ny, nx);
  m.p_wind = ScalarGrid<double>::Constant(ny, nx, m.wind_fill);
  m.p_solar = ScalarGrid<double>::Constant(ny, nx, m.solar_fill);
  m.cond_mean_wind = ScalarGrid<double>::Constant(ny, nx, m.wind_fill);
  m.cond_mean_rsds = ScalarGrid<double>::Constant(ny, nx, m.solar_fill);

  std::vector<double> scratch;
  scratch.reserve(static_cast<std::size_t>(wind_ds.nt()));
  for (Eigen::Index i = 0; i < ny; ++i) {
    for (Eigen::Index j = 0; j < nx; ++j) {
      const CellOutcome cell = analyse_cell(wind_ds, solar_ds, i, j, q, scratch);
      if (cell.has_wind) m.p_wind(i, j) = cell.p_wind;
      if (cell.has_solar) m.p_solar(i, j) = cell.p_solar;
      m.valid_days(i, j) = static_cast<long>(cell.dates.size());
      m.count(i, j) = cell.count;
      if (cell.count > 0) {
        m.cond_mean_wind(i, j) = cell.wind_sum / static_cast<double>(cell.count);
        m.cond_mean_rsds(i, j) = cell.solar_sum / static_cast<double>(cell.count);
      }
    }
  }
  return m;
}

std::vector<std::pair<std::uint8_t, long>> run_length_encode(std::span<const std::uint8_t> index) {
  std::vector<std::pair<std::uint8_t, long>> runs;
  for (const std::uint8_t raw : index) {
    const std::uint8_t v = raw ? 1 : 0;
    if (!runs.empty() && runs.back().first == v) {
      ++runs.back().second;
    } else {
      runs.emplace_back(v, 1);
    }
  }
  return runs;
}

std::vector<std::uint8_t> run_length_decode(std::span<const std::pair<std::uint8_t, long>> runs) {
  std::vector<std::uint8_t> index;
  for (const auto& [v, n] : runs) index.insert(index.end(), static_cast<std::size_t>(n), v);
  return index;
}

std::string drought_json(const DroughtResult& result) {
  nlohmann::ordered_json doc;
  switch (result.kind) {
    case DroughtKind::Compound: doc["kind"] = "compound"; break;
    case DroughtKind::WindOnly: doc["kind"] = "wind_only"; break;
    case DroughtKind::SolarOnly: doc["kind"] = "solar_only"; break;
  }
  auto number_or_null = [](double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
  doc["thresholds"] = {
      {"p_wind", number_or_null(result.threshold.p_wind)},
      {"p_solar", number_or_null(result.threshold.p_solar)},
      {"q", result.threshold.q},
      {"quantile_rule", "linear, rank (n-1)*q"},
      {"period", {result.threshold.start_year, result.threshold.end_year}},
      {"scope", result.threshold.scope == ThresholdScope::RegionMean ? "region_mean" : "per_cell"},
  };
  doc["first_date"] = result.dates.empty() ? std::string() : format_date(result.dates.front());
  doc["n_days"] = result.index.size();
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& [v, n] : run_length_encode(result.index)) runs.push_back({v, n});
  doc["index_rle"] = std::move(runs);
  nlohmann::ordered_json seasons;
  for (Season s : kSeasons) seasons[std::string(to_string(s))] = result.seasonal_counts[s];
  doc["seasonal_counts"] = std::move(seasons);
  doc["total"] = result.total();
  return doc.dump(2) + "\n";
}

void write_map_csv(std::ostream& os, const SpatialDroughtMap& map, const CellMask* mask, Eigen::Index row_offset,
                   Eigen::Index col_offset) {
  os << "cell_i,cell_j,lat_deg,lon_deg,count_days,fraction,p_wind_m_s,p_solar_w_m2,cond_mean_wind_m_s,"
        "cond_mean_rsds_w_m2\n";
  const auto frac = map.fraction();
  for (Eigen::Index i = 0; i < map.count.rows(); ++i) {
    for (Eigen::Index j = 0; j < map.count.cols(); ++j) {
      if (mask && !mask->inside(i, j)) continue;
      os << (i + row_offset) << ',' << (j + col_offset) << ',' << detail::fixed(map.lat2d(i, j), 4) << ','
         << detail::fixed(map.lon2d(i, j), 4) << ',' << map.count(i, j) << ',' << detail::fixed(frac(i, j), 6) << ','
         << detail::fixed(map.p_wind(i, j), 6) << ',' << detail::fixed(map.p_solar(i, j), 6) << ','
         << detail::fixed(map.cond_mean_wind(i, j), 6) << ',' << detail::fixed(map.cond_mean_rsds(i, j), 6) << '\n';
    }
  }
}

}  // namespace edrought
