#pragma once

#include <cstdint>
#include <utility>

#include "edrought/drought.hpp"
#include "edrought/geo.hpp"
#include "edrought/gridstore.hpp"

namespace edrought::synth {

struct VariableParams {
  double mean = 0.0;
  double amplitude = 0.0;   // seasonal cycle half-range
  int peak_day = 1;         // day of year of the cycle maximum
  double noise_std = 0.0;   // day-to-day noise shared by every cell
  double cell_noise_std = 0.0;
  double gradient = 0.0;    // change per degree latitude north of the grid center
};

struct SynthConfig {
  int start_year = 2030;
  int n_years = 10;
  Calendar calendar = Calendar::Standard;
  int ny = 8;
  int nx = 10;
  // Regular lat/lon grid of cell centers.
  double lat0 = 41.25;
  double lon0 = -3.75;
  double dlat = 2.5;
  double dlon = 2.5;
  VariableParams wind{5.0, 1.5, 15, 1.2, 0.3, -0.05};
  VariableParams solar{140.0, 100.0, 196, 35.0, 8.0, -2.0};
  double rho = 0.0;              // correlation of the wind and solar noise
  double missing_fraction = 0.0; // share of (t, cell) entries set to fill
  std::uint64_t seed = 1;

  void check() const;  // throws InvalidConfig
};

struct SynthPair {
  GridDataset wind;
  GridDataset solar;
};

// Seasonal sinusoid + latitude gradient + correlated Gaussian noise, clamped at 0.
SynthPair generate(const SynthConfig& cfg);

// Spatially constant wind/solar pair whose compound drought days at any
// q <= 0.25 are exactly `target` per season: planted days are low in both
// variables, two disjoint background blocks (30% of remaining days each) are
// low in only one variable. Cell centers start at (lat0, lon0) on a 2.5 deg grid.
SynthPair planted_pair(int start_year, int n_years, Calendar calendar, const SeasonCounts& target, int ny = 1,
                       int nx = 1, double lat0 = 46.25, double lon0 = 6.25);

struct OracleResult {
  double p_wind = 0.0;
  double p_solar = 0.0;
  std::vector<std::uint8_t> index;
  SeasonCounts counts;
};

// Naive reference pipeline: explicit loops for the region mean, a full sort
// for each threshold, one pass over days. Independent of the engine code.
OracleResult oracle(const GridDataset& wind, const GridDataset& solar, const RegionBounds& bounds, double q,
                    Weighting weighting = Weighting::Uniform);

SeasonCounts oracle_counts(const GridDataset& wind, const GridDataset& solar, const RegionBounds& bounds, double q);

}  // namespace edrought::synth
