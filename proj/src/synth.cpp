#include "edrought/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "edrought/detail/counter_rng.hpp"

namespace edrought::synth {

namespace {

enum Stream : std::uint64_t {
  kDayNoiseA = 1,
  kDayNoiseB = 2,
  kCellNoiseA = 3,
  kCellNoiseB = 4,
  kWindMissing = 5,
  kSolarMissing = 6,
};

void check_params(const VariableParams& p, const char* name) {
  if (!std::isfinite(p.mean) || !std::isfinite(p.amplitude) || !std::isfinite(p.gradient) || !(p.noise_std >= 0.0) ||
      !(p.cell_noise_std >= 0.0)) {
    throw Error(ErrorKind::InvalidConfig, std::string(name) + " parameters must be finite with non-negative noise");
  }
}

}  // namespace

void SynthConfig::check() const {
  if (n_years < 1 || ny < 1 || nx < 1) throw Error(ErrorKind::InvalidConfig, "n_years, ny and nx must be positive");
  if (!(rho >= -1.0 && rho <= 1.0)) throw Error(ErrorKind::InvalidConfig, "rho must lie in [-1, 1]");
  if (!(missing_fraction >= 0.0 && missing_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "missing_fraction must lie in [0, 1)");
  }
  if (!(dlat > 0.0) || !(dlon > 0.0)) throw Error(ErrorKind::InvalidConfig, "grid spacing must be positive");
  const double lat_end = lat0 + (ny - 1) * dlat;
  const double lon_end = lon0 + (nx - 1) * dlon;
  if (lat0 < -90.0 || lat_end > 90.0 || lon0 < -180.0 || lon_end >= 180.0) {
    throw Error(ErrorKind::InvalidConfig, "grid extends outside [-180,180) x [-90,90]");
  }
  if (start_year < 1 || start_year + n_years > 32767) throw Error(ErrorKind::InvalidConfig, "years out of range");
  check_params(wind, "wind");
  check_params(solar, "solar");
}

SynthPair generate(const SynthConfig& cfg) {
  cfg.check();

  std::vector<Date> dates;
  for (Date d{cfg.start_year, 1, 1}; d.year < cfg.start_year + cfg.n_years; d = next_day(cfg.calendar, d)) {
    dates.push_back(d);
  }
  const auto nt = static_cast<Eigen::Index>(dates.size());
  const Eigen::Index ncell = static_cast<Eigen::Index>(cfg.ny) * cfg.nx;

  CoordArray lat2d(cfg.ny, cfg.nx), lon2d(cfg.ny, cfg.nx);
  for (int i = 0; i < cfg.ny; ++i) {
    for (int j = 0; j < cfg.nx; ++j) {
      lat2d(i, j) = cfg.lat0 + i * cfg.dlat;
      lon2d(i, j) = cfg.lon0 + j * cfg.dlon;
    }
  }
  const double lat_center = cfg.lat0 + 0.5 * (cfg.ny - 1) * cfg.dlat;

  auto make = [&](const char* variable) {
    GridDataset ds;
    ds.variable = variable;
    ds.calendar = cfg.calendar;
    ds.dates = dates;
    ds.lat2d = lat2d;
    ds.lon2d = lon2d;
    ds.values.resize(nt, ncell);
    ds.fill_value = std::numeric_limits<float>::quiet_NaN();
    ds.attrs = {{"generator", "edrought-synth"}, {"seed", std::to_string(cfg.seed)}};
    return ds;
  };
  SynthPair out{make("sfcWind"), make("rsds")};

  const double partner = std::sqrt(std::max(0.0, 1.0 - cfg.rho * cfg.rho));
  auto cycle = [&](const VariableParams& p, const Date& d) {
    const double year_len = days_in_year(cfg.calendar, d.year);
    const double phase = 2.0 * std::numbers::pi * (day_of_year(cfg.calendar, d) - p.peak_day) / year_len;
    return p.mean + p.amplitude * std::cos(phase);
  };

  const std::uint64_t seed = cfg.seed;
  for (Eigen::Index t = 0; t < nt; ++t) {
    const Date& d = dates[static_cast<std::size_t>(t)];
    const auto ut = static_cast<std::uint64_t>(t);
    const double za = detail::counter_normal(seed, kDayNoiseA, ut);
    const double zb = detail::counter_normal(seed, kDayNoiseB, ut);
    const double day_wind = cycle(cfg.wind, d) + cfg.wind.noise_std * za;
    const double day_solar = cycle(cfg.solar, d) + cfg.solar.noise_std * (cfg.rho * za + partner * zb);
    for (Eigen::Index c = 0; c < ncell; ++c) {
      const auto uc = ut * static_cast<std::uint64_t>(ncell) + static_cast<std::uint64_t>(c);
      const double ca = detail::counter_normal(seed, kCellNoiseA, uc);
      const double cb = detail::counter_normal(seed, kCellNoiseB, uc);
      const double offset = lat2d.data()[c] - lat_center;
      const double w = day_wind + cfg.wind.gradient * offset + cfg.wind.cell_noise_std * ca;
      const double s = day_solar + cfg.solar.gradient * offset + cfg.solar.cell_noise_std * (cfg.rho * ca + partner * cb);
      out.wind.values(t, c) = static_cast<float>(std::max(0.0, w));
      out.solar.values(t, c) = static_cast<float>(std::max(0.0, s));
      if (cfg.missing_fraction > 0.0) {
        if (detail::counter_uniform(seed, kWindMissing, uc) < cfg.missing_fraction) out.wind.values(t, c) = out.wind.fill_value;
        if (detail::counter_uniform(seed, kSolarMissing, uc) < cfg.missing_fraction) out.solar.values(t, c) = out.solar.fill_value;
      }
    }
  }
  return out;
}

SynthPair planted_pair(int start_year, int n_years, Calendar calendar, const SeasonCounts& target, int ny, int nx,
                       double lat0, double lon0) {
  SynthConfig grid;
  grid.start_year = start_year;
  grid.n_years = n_years;
  grid.calendar = calendar;
  grid.ny = ny;
  grid.nx = nx;
  grid.lat0 = lat0;
  grid.lon0 = lon0;
  grid.wind = {};
  grid.solar = {};
  SynthPair pair = generate(grid);  // all-zero fields on the requested axis

  const auto nt = pair.wind.dates.size();
  std::vector<int> role(nt, 0);  // 0 none, 1 planted, 2 low wind only, 3 low solar only
  SeasonCounts remaining = target;
  for (std::size_t t = 0; t < nt; ++t) {
    const Season s = season_of(pair.wind.dates[t].month);
    if (remaining[s] > 0) {
      role[t] = 1;
      --remaining[s];
    }
  }
  for (Season s : kSeasons) {
    if (remaining[s] != 0 || target[s] < 0) {
      throw Error(ErrorKind::InvalidConfig, "season " + std::string(to_string(s)) + " has fewer days than requested");
    }
  }
  const auto free_days = static_cast<std::size_t>(std::count(role.begin(), role.end(), 0));
  const std::size_t block = (free_days * 3) / 10;
  if (static_cast<double>(block) < 0.25 * static_cast<double>(nt) + 2.0) {
    throw Error(ErrorKind::InvalidConfig, "too many planted days for disjoint background blocks");
  }
  std::size_t assigned = 0;
  for (std::size_t t = 0; t < nt; ++t) {
    if (role[t] != 0) continue;
    if (assigned < block) {
      role[t] = 2;
    } else if (assigned < 2 * block) {
      role[t] = 3;
    }
    ++assigned;
  }

  for (std::size_t t = 0; t < nt; ++t) {
    const bool low_wind = role[t] == 1 || role[t] == 2;
    const bool low_solar = role[t] == 1 || role[t] == 3;
    const auto row = static_cast<Eigen::Index>(t);
    pair.wind.values.row(row).setConstant(low_wind ? 1.0f : 6.0f);
    pair.solar.values.row(row).setConstant(low_solar ? 20.0f : 180.0f);
  }
  pair.wind.attrs = {{"generator", "edrought-planted"}};
  pair.solar.attrs = pair.wind.attrs;
  return pair;
}

}  // namespace edrought::synth
