#include "edrought/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "edrought/detail/counter_rng.hpp"
#include "edrought/detail/format.hpp"

namespace edrought {

namespace {

template <typename Getter>
MeanStd mean_std(std::size_t n, Getter value, StdDivisor divisor) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += value(k);
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) ss += (value(k) - mean) * (value(k) - mean);
  const double denom = divisor == StdDivisor::N ? static_cast<double>(n) : static_cast<double>(n) - 1.0;
  const double sd = denom > 0.0 ? std::sqrt(ss / denom) : std::numeric_limits<double>::quiet_NaN();
  return {mean, sd};
}

std::optional<double> relative_pct(double before, double after) {
  if (before == 0.0) return std::nullopt;
  return 100.0 * (after - before) / before;
}

}  // namespace

std::string_view to_string(StdDivisor d) { return d == StdDivisor::N ? "n" : "n-1"; }

StdDivisor parse_std_divisor(std::string_view name) {
  if (name == "n") return StdDivisor::N;
  if (name == "n-1") return StdDivisor::NMinus1;
  throw Error(ErrorKind::InvalidConfig, "std divisor must be 'n' or 'n-1', got '" + std::string(name) + "'");
}

GroupStats group_stats(const EnsembleGroup& g, StdDivisor divisor) {
  if (g.members.empty()) throw Error(ErrorKind::EmptyGroup, "group '" + g.name + "' has no members");
  GroupStats out;
  for (Season s : kSeasons) {
    out.seasons[static_cast<std::size_t>(s)] = mean_std(
        g.members.size(), [&](std::size_t k) { return static_cast<double>(g.members[k].counts[s]); }, divisor);
  }
  return out;
}

std::optional<double> agreement(std::span<const double> deltas) {
  if (deltas.empty()) throw Error(ErrorKind::EmptyGroup, "agreement of an empty delta list");
  const double total = std::accumulate(deltas.begin(), deltas.end(), 0.0);
  const int mean_sign = (total > 0.0) - (total < 0.0);
  int nonzero = 0;
  int matching = 0;
  for (double d : deltas) {
    if (d == 0.0) continue;
    ++nonzero;
    if (((d > 0.0) - (d < 0.0)) == mean_sign) ++matching;
  }
  if (nonzero == 0) return std::nullopt;
  return static_cast<double>(matching) / nonzero;
}

std::vector<ChangeStats> change_stats(const EnsembleGroup& before, const EnsembleGroup& after, StdDivisor divisor) {
  if (before.name != after.name) {
    throw Error(ErrorKind::MemberMismatch, "groups '" + before.name + "' and '" + after.name + "' differ");
  }
  if (before.members.empty() || after.members.empty()) {
    throw Error(ErrorKind::EmptyGroup, "group '" + before.name + "' has no members in one period");
  }
  std::map<std::string, const EnsembleMember*> later;
  for (const auto& m : after.members) {
    if (!later.emplace(m.id, &m).second) throw Error(ErrorKind::MemberMismatch, "duplicate member id '" + m.id + "'");
  }
  std::map<std::string, std::pair<const EnsembleMember*, const EnsembleMember*>> pairs;
  for (const auto& m : before.members) {
    auto it = later.find(m.id);
    if (it == later.end()) {
      throw Error(ErrorKind::MemberMismatch, "member '" + m.id + "' missing from the later period of '" + before.name + "'");
    }
    if (!pairs.emplace(m.id, std::make_pair(&m, it->second)).second) {
      throw Error(ErrorKind::MemberMismatch, "duplicate member id '" + m.id + "'");
    }
  }
  if (pairs.size() != later.size()) {
    for (const auto& [id, _] : later) {
      if (!pairs.count(id)) {
        throw Error(ErrorKind::MemberMismatch, "member '" + id + "' missing from the earlier period of '" + before.name + "'");
      }
    }
  }

  const GroupStats s1 = group_stats(before, divisor);
  const GroupStats s2 = group_stats(after, divisor);
  std::vector<ChangeStats> out;
  for (Season s : kSeasons) {
    ChangeStats c;
    c.season = s;
    c.n_members = static_cast<int>(pairs.size());
    c.mean_before = s1[s].mean;
    c.mean_after = s2[s].mean;
    c.std_before = s1[s].std;
    c.std_after = s2[s].std;
    c.delta_mean_days = c.mean_after - c.mean_before;
    c.delta_mean_pct = relative_pct(c.mean_before, c.mean_after);
    if (!std::isnan(c.std_before)) c.delta_std_pct = relative_pct(c.std_before, c.std_after);
    std::vector<double> deltas;
    deltas.reserve(pairs.size());
    for (const auto& [id, pr] : pairs) {
      deltas.push_back(static_cast<double>(pr.second->counts[s] - pr.first->counts[s]));
    }
    if (auto a = agreement(deltas)) c.agreement_pct = 100.0 * *a;
    out.push_back(c);
  }
  return out;
}

std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  detail::CounterStream rng(seed, 0x5eed0de7ULL);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::vector<SensitivityRow> sensitivity(const std::vector<std::vector<SeasonCounts>>& strata,
                                        std::span<const int> subset_sizes, std::uint64_t seed, StdDivisor divisor) {
  if (strata.empty()) throw Error(ErrorKind::EmptyGroup, "no samples");
  std::vector<std::vector<std::size_t>> orders;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    orders.push_back(seeded_order(strata[s].size(), detail::mix64(seed + s)));
  }
  std::vector<SensitivityRow> rows;
  for (int k : subset_sizes) {
    if (k < 1) throw Error(ErrorKind::InvalidConfig, "subset size must be positive");
    std::vector<const SeasonCounts*> pooled;
    for (std::size_t s = 0; s < strata.size(); ++s) {
      if (static_cast<std::size_t>(k) > strata[s].size()) {
        throw Error(ErrorKind::SubsetTooLarge, "subset size " + std::to_string(k) + " exceeds the " +
                                                   std::to_string(strata[s].size()) + " available samples");
      }
      for (int r = 0; r < k; ++r) pooled.push_back(&strata[s][orders[s][static_cast<std::size_t>(r)]]);
    }
    SensitivityRow row;
    row.subset_size = k;
    row.n_pooled = static_cast<int>(pooled.size());
    for (Season season : kSeasons) {
      const MeanStd ms = mean_std(
          pooled.size(), [&](std::size_t i) { return static_cast<double>((*pooled[i])[season]); }, divisor);
      long mx = 0;
      for (const auto* p : pooled) mx = std::max(mx, (*p)[season]);
      row.seasons[static_cast<std::size_t>(season)] = {ms.mean, ms.std, mx};
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SensitivityRow> sensitivity(std::span<const SeasonCounts> samples, std::span<const int> subset_sizes,
                                        std::uint64_t seed, StdDivisor divisor) {
  return sensitivity(std::vector<std::vector<SeasonCounts>>{{samples.begin(), samples.end()}}, subset_sizes, seed,
                     divisor);
}

void write_change_csv(std::ostream& os, std::span<const DatasetChange> changes) {
  os << "dataset,season,delta_mean_pct,delta_mean_days,delta_std_pct,agreement_pct,n_members\n";
  auto opt = [](const std::optional<double>& v, bool sign) {
    if (!v) return std::string("n/a");
    return sign ? detail::signed_fixed(*v, 1) : detail::fixed(*v, 1);
  };
  for (const auto& dc : changes) {
    for (const auto& c : dc.rows) {
      os << dc.dataset << ',' << to_string(c.season) << ',' << opt(c.delta_mean_pct, true) << ','
         << detail::signed_fixed(c.delta_mean_days, 1) << ',' << opt(c.delta_std_pct, true) << ','
         << opt(c.agreement_pct, false) << ',' << c.n_members << '\n';
    }
  }
}

}  // namespace edrought
