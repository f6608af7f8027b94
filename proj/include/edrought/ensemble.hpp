#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "edrought/drought.hpp"

namespace edrought {

struct EnsembleMember {
  std::string id;
  SeasonCounts counts;
};

// Members of one dataset group (e.g. "RCM CMIP5") for one analysis period.
struct EnsembleGroup {
  std::string name;
  std::vector<EnsembleMember> members;
};

enum class StdDivisor { N, NMinus1 };

std::string_view to_string(StdDivisor d);
StdDivisor parse_std_divisor(std::string_view name);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct GroupStats {
  std::array<MeanStd, 4> seasons{};

  const MeanStd& operator[](Season s) const { return seasons[static_cast<std::size_t>(s)]; }
};

// Per-season mean and standard deviation over members. With NMinus1 a
// single-member group has NaN std.
GroupStats group_stats(const EnsembleGroup& g, StdDivisor divisor = StdDivisor::N);

// Fraction of nonzero deltas whose sign matches the sign of the mean delta.
// nullopt when every delta is zero. Throws EmptyGroup on empty input.
std::optional<double> agreement(std::span<const double> deltas);

struct ChangeStats {
  Season season = Season::DJF;
  double mean_before = 0.0;
  double mean_after = 0.0;
  double std_before = 0.0;
  double std_after = 0.0;
  double delta_mean_days = 0.0;
  std::optional<double> delta_mean_pct;  // nullopt: zero baseline
  std::optional<double> delta_std_pct;   // nullopt: zero baseline std
  std::optional<double> agreement_pct;   // nullopt: all member deltas zero
  int n_members = 0;
};

// Period-to-period change, pairing members of `before` and `after` by id.
std::vector<ChangeStats> change_stats(const EnsembleGroup& before, const EnsembleGroup& after,
                                      StdDivisor divisor = StdDivisor::N);

struct SampleStats {
  double mean = 0.0;
  double std = 0.0;
  long max = 0;
};

struct SensitivityRow {
  int subset_size = 0;  // samples per stratum
  int n_pooled = 0;
  std::array<SampleStats, 4> seasons{};

  const SampleStats& operator[](Season s) const { return seasons[static_cast<std::size_t>(s)]; }
};

// Deterministic permutation of [0, n) from `seed`.
std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed);

// Statistics over the first k samples of a seeded order, for each k.
std::vector<SensitivityRow> sensitivity(std::span<const SeasonCounts> samples, std::span<const int> subset_sizes,
                                        std::uint64_t seed, StdDivisor divisor = StdDivisor::N);

// Stratified form: each stratum (e.g. the samples of one emulated model) is
// ordered independently and its first k samples are pooled across strata.
// Stratum s is ordered exactly as the single-list form with seed + s.
std::vector<SensitivityRow> sensitivity(const std::vector<std::vector<SeasonCounts>>& strata,
                                        std::span<const int> subset_sizes, std::uint64_t seed,
                                        StdDivisor divisor = StdDivisor::N);

struct DatasetChange {
  std::string dataset;
  std::vector<ChangeStats> rows;
};

// Columns: dataset, season, delta_mean_pct, delta_mean_days, delta_std_pct, agreement_pct, n_members.
void write_change_csv(std::ostream& os, std::span<const DatasetChange> changes);

}  // namespace edrought
