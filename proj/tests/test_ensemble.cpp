#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "edrought/detail/counter_rng.hpp"
#include "edrought/ensemble.hpp"

using namespace edrought;

namespace {

SeasonCounts counts(long djf, long mam, long jja, long son) { return SeasonCounts{{djf, mam, jja, son}}; }

EnsembleGroup group_of(const std::string& name, const std::vector<long>& son_counts) {
  EnsembleGroup g{name, {}};
  for (std::size_t k = 0; k < son_counts.size(); ++k) {
    g.members.push_back({"m" + std::to_string(k), counts(0, 0, 0, son_counts[k])});
  }
  return g;
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

const ChangeStats& row(const std::vector<ChangeStats>& rows, Season s) {
  return rows[static_cast<std::size_t>(s)];
}

}  // namespace

TEST(GroupStats, Examples) {
  EnsembleGroup same{"g", {{"a", counts(10, 0, 0, 0)}, {"b", counts(10, 0, 0, 0)}, {"c", counts(10, 0, 0, 0)}}};
  EXPECT_EQ(group_stats(same)[Season::DJF].mean, 10.0);
  EXPECT_EQ(group_stats(same)[Season::DJF].std, 0.0);

  EnsembleGroup spread{"g", {{"a", counts(0, 0, 0, 0)}, {"b", counts(10, 0, 0, 0)}}};
  EXPECT_EQ(group_stats(spread)[Season::DJF].mean, 5.0);
  EXPECT_EQ(group_stats(spread)[Season::DJF].std, 5.0);
  EXPECT_DOUBLE_EQ(group_stats(spread, StdDivisor::NMinus1)[Season::DJF].std, std::sqrt(50.0));

  EnsembleGroup one{"g", {{"a", counts(7, 0, 0, 0)}}};
  EXPECT_EQ(group_stats(one)[Season::DJF].mean, 7.0);
  EXPECT_EQ(group_stats(one)[Season::DJF].std, 0.0);
  EXPECT_TRUE(std::isnan(group_stats(one, StdDivisor::NMinus1)[Season::DJF].std));
}

TEST(GroupStats, EmptyGroup) {
  EXPECT_EQ(error_kind([] { group_stats(EnsembleGroup{"g", {}}); }), ErrorKind::EmptyGroup);
}

TEST(Agreement, Examples) {
  const std::vector<double> all_negative{-2, -3, -1};
  EXPECT_EQ(agreement(all_negative), 1.0);
  const std::vector<double> mostly_negative{-2, 2, -2, -2};
  EXPECT_EQ(agreement(mostly_negative), 0.75);
  const std::vector<double> zeros{0, 0};
  EXPECT_FALSE(agreement(zeros).has_value());
  const std::vector<double> with_zero{0, 1, 1, -1, 1};
  EXPECT_EQ(agreement(with_zero), 0.75);
  EXPECT_EQ(error_kind([] { agreement(std::span<const double>{}); }), ErrorKind::EmptyGroup);
}

TEST(Agreement, BoundsProperty) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> d(1 + rng() % 12);
    for (auto& x : d) x = static_cast<double>(static_cast<int>(rng() % 11) - 5);
    const auto a = agreement(d);
    double sum = 0;
    for (double x : d) sum += x;
    bool all_share = true, any_nonzero = false;
    for (double x : d) {
      if (x == 0) continue;
      any_nonzero = true;
      if ((x > 0) != (sum > 0) || sum == 0) all_share = false;
    }
    ASSERT_EQ(a.has_value(), any_nonzero);
    if (!a) continue;
    EXPECT_GE(*a, 0.0);
    EXPECT_LE(*a, 1.0);
    EXPECT_EQ(*a == 1.0, all_share);
  }
}

TEST(ChangeStats, ThreeToSeven) {
  const auto rows = change_stats(group_of("GCM CMIP5", {2, 3, 4}), group_of("GCM CMIP5", {6, 7, 8}));
  const ChangeStats& son = row(rows, Season::SON);
  EXPECT_DOUBLE_EQ(son.mean_before, 3.0);
  EXPECT_DOUBLE_EQ(son.mean_after, 7.0);
  EXPECT_DOUBLE_EQ(son.delta_mean_days, 4.0);
  EXPECT_NEAR(*son.delta_mean_pct, 133.3, 0.05);
  EXPECT_DOUBLE_EQ(*son.delta_std_pct, 0.0);
  EXPECT_EQ(son.agreement_pct, 100.0);
  EXPECT_EQ(son.n_members, 3);
  // Zero baselines in the other seasons stay undefined.
  EXPECT_FALSE(row(rows, Season::DJF).delta_mean_pct.has_value());
  EXPECT_FALSE(row(rows, Season::DJF).agreement_pct.has_value());
}

TEST(ChangeStats, ThreeOfFourAgree) {
  const auto rows = change_stats(group_of("RCM CMIP5", {3, 3, 3, 3}), group_of("RCM CMIP5", {4, 4, 2, 4}));
  EXPECT_EQ(row(rows, Season::SON).agreement_pct, 75.0);
}

TEST(ChangeStats, IdenticalGroups) {
  const EnsembleGroup g = group_of("GCM CMIP6", {5, 9, 2});
  const auto rows = change_stats(g, g);
  const ChangeStats& son = row(rows, Season::SON);
  EXPECT_EQ(son.delta_mean_days, 0.0);
  EXPECT_EQ(*son.delta_mean_pct, 0.0);
  EXPECT_EQ(*son.delta_std_pct, 0.0);
  EXPECT_FALSE(son.agreement_pct.has_value());
}

TEST(ChangeStats, SingleMember) {
  const auto up = change_stats(group_of("g", {3}), group_of("g", {5}));
  EXPECT_EQ(row(up, Season::SON).std_before, 0.0);
  EXPECT_EQ(row(up, Season::SON).agreement_pct, 100.0);
  EXPECT_FALSE(row(up, Season::SON).delta_std_pct.has_value());
  const auto flat = change_stats(group_of("g", {3}), group_of("g", {3}));
  EXPECT_FALSE(row(flat, Season::SON).agreement_pct.has_value());
}

TEST(ChangeStats, MemberMismatch) {
  EXPECT_EQ(error_kind([] { change_stats(group_of("a", {1}), group_of("b", {1})); }), ErrorKind::MemberMismatch);
  EXPECT_EQ(error_kind([] { change_stats(group_of("a", {1, 2}), group_of("a", {1})); }), ErrorKind::MemberMismatch);
  EXPECT_EQ(error_kind([] { change_stats(group_of("a", {1}), group_of("a", {1, 2})); }), ErrorKind::MemberMismatch);
  EnsembleGroup dup = group_of("a", {1, 2});
  dup.members[1].id = dup.members[0].id;
  EXPECT_EQ(error_kind([&] { change_stats(dup, dup); }), ErrorKind::MemberMismatch);
}

TEST(ChangeStats, PairingInvariance) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    EnsembleGroup a{"g", {}}, b{"g", {}};
    for (std::size_t k = 0; k < n; ++k) {
      a.members.push_back({"id" + std::to_string(k), counts(rng() % 50, rng() % 50, rng() % 50, rng() % 50)});
      b.members.push_back({"id" + std::to_string(k), counts(rng() % 50, rng() % 50, rng() % 50, rng() % 50)});
    }
    const auto ref = change_stats(a, b);
    std::shuffle(b.members.begin(), b.members.end(), rng);
    std::shuffle(a.members.begin(), a.members.end(), rng);
    const auto shuffled = change_stats(a, b);
    for (Season s : kSeasons) {
      EXPECT_NEAR(row(ref, s).delta_mean_days, row(shuffled, s).delta_mean_days, 1e-12);
      EXPECT_EQ(row(ref, s).agreement_pct, row(shuffled, s).agreement_pct);
    }
  }
}

TEST(ChangeStats, ScaleConsistency) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 8;
    const long c = 1 + static_cast<long>(rng() % 9);
    EnsembleGroup a{"g", {}}, b{"g", {}}, ac{"g", {}}, bc{"g", {}};
    for (std::size_t k = 0; k < n; ++k) {
      const std::string id = "id" + std::to_string(k);
      const SeasonCounts x = counts(1 + rng() % 40, rng() % 40, rng() % 40, 1 + rng() % 40);
      const SeasonCounts y = counts(rng() % 40, rng() % 40, rng() % 40, rng() % 40);
      SeasonCounts xc = x, yc = y;
      for (auto& v : xc.n) v *= c;
      for (auto& v : yc.n) v *= c;
      a.members.push_back({id, x});
      b.members.push_back({id, y});
      ac.members.push_back({id, xc});
      bc.members.push_back({id, yc});
    }
    const auto base = change_stats(a, b);
    const auto scaled = change_stats(ac, bc);
    for (Season s : kSeasons) {
      EXPECT_NEAR(row(scaled, s).delta_mean_days, c * row(base, s).delta_mean_days, 1e-9);
      ASSERT_EQ(row(scaled, s).delta_mean_pct.has_value(), row(base, s).delta_mean_pct.has_value());
      if (row(base, s).delta_mean_pct) EXPECT_NEAR(*row(scaled, s).delta_mean_pct, *row(base, s).delta_mean_pct, 1e-9);
      ASSERT_EQ(row(scaled, s).delta_std_pct.has_value(), row(base, s).delta_std_pct.has_value());
      if (row(base, s).delta_std_pct) EXPECT_NEAR(*row(scaled, s).delta_std_pct, *row(base, s).delta_std_pct, 1e-9);
      EXPECT_EQ(row(scaled, s).agreement_pct, row(base, s).agreement_pct);
    }
  }
}

TEST(ChangeCsv, FormatsSignsAndMissing) {
  std::vector<DatasetChange> changes{
      {"GCM CMIP5", change_stats(group_of("GCM CMIP5", {2, 3, 4}), group_of("GCM CMIP5", {6, 7, 8}))}};
  std::ostringstream os;
  write_change_csv(os, changes);
  const std::string out = os.str();
  EXPECT_EQ(out.substr(0, out.find('\n')),
            "dataset,season,delta_mean_pct,delta_mean_days,delta_std_pct,agreement_pct,n_members");
  EXPECT_NE(out.find("GCM CMIP5,SON,+133.3,+4.0,0.0,100.0,3\n"), std::string::npos);
  EXPECT_NE(out.find("GCM CMIP5,DJF,n/a,0.0,n/a,n/a,3\n"), std::string::npos);
}

TEST(SeededOrder, PermutationAndDeterminism) {
  for (std::size_t n : {0u, 1u, 2u, 10u, 50u, 400u}) {
    const auto a = seeded_order(n, 42);
    EXPECT_EQ(a, seeded_order(n, 42));
    EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), n);
    if (n) EXPECT_EQ(*std::max_element(a.begin(), a.end()), n - 1);
  }
  EXPECT_NE(seeded_order(50, 1), seeded_order(50, 2));
}

namespace {

// Pooled statistics with explicit loops over an independently assembled pool.
SampleStats naive_stats(const std::vector<long>& pool) {
  double sum = 0;
  for (long v : pool) sum += static_cast<double>(v);
  const double mean = sum / static_cast<double>(pool.size());
  double ss = 0;
  for (long v : pool) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
  long mx = 0;
  for (long v : pool) mx = std::max(mx, v);
  return {mean, std::sqrt(ss / static_cast<double>(pool.size())), mx};
}

std::vector<SeasonCounts> synthetic_samples(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> son(12, 3), djf(40, 6);
  std::vector<SeasonCounts> out;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(counts(std::max(0L, std::lround(djf(rng))), rng() % 5, rng() % 3, std::max(0L, std::lround(son(rng)))));
  }
  return out;
}

}  // namespace

TEST(Sensitivity, MatchesNaiveRecomputation) {
  std::mt19937 rng(50);
  const auto samples = synthetic_samples(rng, 50);
  const std::vector<int> sizes{10, 50};
  const auto rows = sensitivity(samples, sizes, 2024);
  const auto order = seeded_order(50, detail::mix64(2024));
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    EXPECT_EQ(rows[r].subset_size, sizes[r]);
    EXPECT_EQ(rows[r].n_pooled, sizes[r]);
    for (Season s : kSeasons) {
      std::vector<long> pool;
      for (int k = 0; k < sizes[r]; ++k) pool.push_back(samples[order[static_cast<std::size_t>(k)]][s]);
      const SampleStats want = naive_stats(pool);
      EXPECT_EQ(rows[r][s].mean, want.mean);
      EXPECT_EQ(rows[r][s].std, want.std);
      EXPECT_EQ(rows[r][s].max, want.max);
    }
  }
  for (Season s : kSeasons) EXPECT_GE(rows[1][s].max, rows[0][s].max);
}

TEST(Sensitivity, IdenticalSamples) {
  const std::vector<SeasonCounts> samples(50, counts(30, 4, 1, 9));
  const std::vector<int> sizes{1, 10, 25, 50};
  for (const auto& r : sensitivity(samples, sizes, 3)) {
    EXPECT_EQ(r[Season::DJF].mean, 30.0);
    EXPECT_EQ(r[Season::DJF].std, 0.0);
    EXPECT_EQ(r[Season::SON].max, 9);
  }
}

TEST(Sensitivity, MaxMonotoneInSubsetSize) {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const auto samples = synthetic_samples(rng, 50);
    std::vector<int> sizes(50);
    for (int k = 0; k < 50; ++k) sizes[static_cast<std::size_t>(k)] = k + 1;
    const auto rows = sensitivity(samples, sizes, static_cast<std::uint64_t>(trial));
    for (std::size_t r = 1; r < rows.size(); ++r) {
      for (Season s : kSeasons) EXPECT_GE(rows[r][s].max, rows[r - 1][s].max);
    }
  }
}

TEST(Sensitivity, StrataMatchSingleListOrdering) {
  std::mt19937 rng(52);
  std::vector<std::vector<SeasonCounts>> strata;
  for (int m = 0; m < 4; ++m) strata.push_back(synthetic_samples(rng, 50));
  const std::vector<int> sizes{10};
  const auto pooled = sensitivity(strata, sizes, 77);
  EXPECT_EQ(pooled[0].n_pooled, 40);
  std::vector<long> pool;
  for (std::size_t m = 0; m < strata.size(); ++m) {
    const auto order = seeded_order(50, detail::mix64(77 + m));
    for (int k = 0; k < 10; ++k) pool.push_back(strata[m][order[static_cast<std::size_t>(k)]][Season::SON]);
    const auto single = sensitivity(strata[m], sizes, 77 + m);
    std::vector<long> own(pool.end() - 10, pool.end());
    EXPECT_EQ(single[0][Season::SON].mean, naive_stats(own).mean);
  }
  EXPECT_EQ(pooled[0][Season::SON].mean, naive_stats(pool).mean);
  EXPECT_EQ(pooled[0][Season::SON].std, naive_stats(pool).std);
}

TEST(Sensitivity, Errors) {
  const std::vector<SeasonCounts> samples(10, counts(1, 1, 1, 1));
  const std::vector<int> too_big{11};
  EXPECT_EQ(error_kind([&] { sensitivity(samples, too_big, 1); }), ErrorKind::SubsetTooLarge);
  const std::vector<int> zero{0};
  EXPECT_EQ(error_kind([&] { sensitivity(samples, zero, 1); }), ErrorKind::InvalidConfig);
}
