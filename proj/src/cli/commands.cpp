#include "edrought/cli/commands.hpp"

#include <map>
#include <sstream>

#include "edrought/detail/format.hpp"
#include "edrought/error.hpp"
#include "edrought/gridstore.hpp"

namespace edrought::cli {

namespace {

struct LoadedPair {
  GridDataset wind;
  GridDataset solar;
};

// Data errors carry the offending paths.
LoadedPair load_pair(const VariablePaths& paths) {
  LoadedPair p{read_dataset(paths.wind), read_dataset(paths.solar)};
  if (p.wind.variable != "sfcWind") {
    throw Error(ErrorKind::InvalidDataset, paths.wind.string() + ": expected sfcWind, file holds " + p.wind.variable);
  }
  if (p.solar.variable != "rsds") {
    throw Error(ErrorKind::InvalidDataset, paths.solar.string() + ": expected rsds, file holds " + p.solar.variable);
  }
  try {
    check_same_grid(p.wind, p.solar);
  } catch (const Error& e) {
    throw Error(e.kind(), paths.wind.string() + " vs " + paths.solar.string() + ": " + e.what());
  }
  return p;
}

template <typename Fn>
auto with_paths(const VariablePaths& paths, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::string msg = e.what();
    if (msg.find(paths.wind.string()) != std::string::npos || msg.find(paths.solar.string()) != std::string::npos) throw;
    const std::string prefix = std::string(to_string(e.kind())) + ": ";
    if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
    throw Error(e.kind(), paths.wind.string() + " / " + paths.solar.string() + ": " + msg);
  }
}

struct RegionAnalysis {
  SeriesWithDates wind;
  SeriesWithDates solar;
};

RegionAnalysis region_series_pair(const VariablePaths& paths, const RunOptions& opts) {
  return with_paths(paths, [&] {
    const LoadedPair p = load_pair(paths);
    return RegionAnalysis{daily_region_series(p.wind, opts.bounds, opts.weighting),
                          daily_region_series(p.solar, opts.bounds, opts.weighting)};
  });
}

std::string member_columns(const MemberKey& k, const Period& p) {
  return k.group + ',' + k.generation + ',' + k.model + ',' + k.sample + ',' + p.label();
}

std::string bounds_text(const RegionBounds& b) {
  return detail::exact(b.lon_min) + "," + detail::exact(b.lon_max) + "," + detail::exact(b.lat_min) + "," +
         detail::exact(b.lat_max);
}

}  // namespace

void RunOptions::check() const {
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorKind::InvalidQuantile, "quantile must satisfy 0 < q < 1, got " + detail::exact(q));
  }
  bounds.check();
}

std::string provenance_line(const std::string& command, const RunOptions& opts, const std::string& units) {
  return "# edrought " + command + "; q=" + detail::exact(opts.q) + "; weighting=" +
         std::string(to_string(opts.weighting)) + "; quantile=linear interpolation at zero-based rank (n-1)*q" +
         "; comparison=inclusive (<=); bounds=" + bounds_text(opts.bounds) +
         "; std_divisor=" + std::string(to_string(opts.std_divisor)) + "; units: " + units + "\n";
}

std::string cmd_counts(const Manifest& manifest, const RunOptions& opts) {
  opts.check();
  std::ostringstream os;
  os << provenance_line("counts", opts, "drought_days [days], p_wind [m/s], p_solar [W/m2]");
  os << "group,generation,model,sample,period,season,drought_days,p_wind_m_s,p_solar_w_m2,n_days\n";
  for (const auto& [key, periods] : manifest.members) {
    for (const auto& [period, paths] : periods) {
      const RegionAnalysis a = region_series_pair(paths, opts);
      const DroughtResult r = compound_drought(a.wind, a.solar, opts.q);
      for (Season s : kSeasons) {
        os << member_columns(key, period) << ',' << to_string(s) << ',' << r.seasonal_counts[s] << ','
           << detail::exact(r.threshold.p_wind) << ',' << detail::exact(r.threshold.p_solar) << ','
           << r.index.size() << '\n';
      }
    }
  }
  return os.str();
}

std::string cmd_change(const Manifest& manifest, const RunOptions& opts, const Period& before, const Period& after) {
  opts.check();
  std::map<std::string, std::pair<EnsembleGroup, EnsembleGroup>> groups;
  for (const auto& [key, periods] : manifest.members) {
    auto& [g1, g2] = groups[key.dataset()];
    g1.name = g2.name = key.dataset();
    for (const auto& [period, paths] : periods) {
      if (period != before && period != after) continue;
      const RegionAnalysis a = region_series_pair(paths, opts);
      const DroughtResult r = compound_drought(a.wind, a.solar, opts.q);
      if (period == before) g1.members.push_back({key.id(), r.seasonal_counts});
      if (period == after) g2.members.push_back({key.id(), r.seasonal_counts});
    }
  }

  std::vector<DatasetChange> changes;
  for (const auto& [name, pair] : groups) {
    const auto& [g1, g2] = pair;
    if (g1.members.empty() && g2.members.empty()) continue;
    try {
      changes.push_back({name, change_stats(g1, g2, opts.std_divisor)});
    } catch (const Error& e) {
      throw Error(ErrorKind::ManifestError, "dataset '" + name + "' between " + before.label() + " and " +
                                                after.label() + ": " + e.what());
    }
  }
  std::ostringstream os;
  os << provenance_line("change " + before.label() + " -> " + after.label(), opts,
                        "delta_mean_pct [%], delta_mean_days [days], delta_std_pct [%], agreement_pct [%]");
  write_change_csv(os, changes);
  return os.str();
}

std::string cmd_spatial(const Manifest& manifest, const RunOptions& opts, const MemberKey& member,
                        const Period& period) {
  opts.check();
  const auto mit = manifest.members.find(member);
  if (mit == manifest.members.end()) throw Error(ErrorKind::ManifestError, "member " + member.label() + " not in manifest");
  const auto pit = mit->second.find(period);
  if (pit == mit->second.end()) {
    throw Error(ErrorKind::ManifestError, "member " + member.label() + " has no period " + period.label());
  }
  const VariablePaths& paths = pit->second;

  std::ostringstream os;
  os << provenance_line("spatial " + member.label() + " " + period.label(), opts,
                        "count [days], fraction [count/valid days], p_wind and cond_mean_wind [m/s], "
                        "p_solar and cond_mean_rsds [W/m2], lat/lon [deg]");
  with_paths(paths, [&] {
    const LoadedPair p = load_pair(paths);
    const RegionSubset wind = subset_region(p.wind, opts.bounds);
    const RegionSubset solar = subset_region(p.solar, opts.bounds);
    const SpatialDroughtMap map = spatial_drought_map(wind.dataset, solar.dataset, opts.q);
    write_map_csv(os, map, &wind.mask, wind.row_offset, wind.col_offset);
    return 0;
  });
  return os.str();
}

std::string cmd_single_var(const Manifest& manifest, const RunOptions& opts, Variable variable) {
  opts.check();
  std::ostringstream os;
  os << provenance_line(std::string("single-var ") + std::string(to_string(variable)), opts,
                        variable == Variable::Wind ? "drought_days [days], threshold [m/s]"
                                                   : "drought_days [days], threshold [W/m2]");
  os << "group,generation,model,sample,period,variable,season,drought_days,threshold\n";
  for (const auto& [key, periods] : manifest.members) {
    for (const auto& [period, paths] : periods) {
      const RegionAnalysis a = region_series_pair(paths, opts);
      const DroughtResult r = single_variable_drought(variable == Variable::Wind ? a.wind : a.solar, opts.q, variable);
      const double p = variable == Variable::Wind ? r.threshold.p_wind : r.threshold.p_solar;
      for (Season s : kSeasons) {
        os << member_columns(key, period) << ',' << to_string(variable) << ',' << to_string(s) << ','
           << r.seasonal_counts[s] << ',' << detail::exact(p) << '\n';
      }
    }
  }
  return os.str();
}

std::string cmd_point(const Manifest& manifest, const RunOptions& opts, double lon, double lat) {
  opts.check();
  std::ostringstream os;
  os << provenance_line("point " + detail::exact(lon) + "E " + detail::exact(lat) + "N", opts,
                        "drought_days [days], cell_lon/cell_lat [deg], distance [km], p_wind [m/s], "
                        "p_solar [W/m2]; thresholds per cell");
  os << "group,generation,model,sample,period,cell_i,cell_j,cell_lon,cell_lat,distance_km,season,drought_days,"
        "p_wind_m_s,p_solar_w_m2\n";
  for (const auto& [key, periods] : manifest.members) {
    for (const auto& [period, paths] : periods) {
      with_paths(paths, [&] {
        const LoadedPair p = load_pair(paths);
        const NearestCell cell = nearest_cell(p.wind.lat2d, p.wind.lon2d, lon, lat);
        const DroughtResult r = cell_drought(p.wind, p.solar, cell.i, cell.j, opts.q);
        for (Season s : kSeasons) {
          os << member_columns(key, period) << ',' << cell.i << ',' << cell.j << ',' << detail::fixed(cell.lon, 4)
             << ',' << detail::fixed(cell.lat, 4) << ',' << detail::fixed(cell.distance_km, 3) << ','
             << to_string(s) << ',' << r.seasonal_counts[s] << ',' << detail::exact(r.threshold.p_wind) << ','
             << detail::exact(r.threshold.p_solar) << '\n';
        }
        return 0;
      });
    }
  }
  return os.str();
}

std::string cmd_sensitivity(const Manifest& manifest, const RunOptions& opts, const std::vector<int>& sizes,
                            const std::string& group) {
  opts.check();
  // dataset -> period -> model -> samples (ordered by sample id)
  std::map<std::string, std::map<Period, std::map<std::string, std::vector<SeasonCounts>>>> tree;
  for (const auto& [key, periods] : manifest.members) {
    if (key.group != group) continue;
    for (const auto& [period, paths] : periods) {
      const RegionAnalysis a = region_series_pair(paths, opts);
      tree[key.dataset()][period][key.model].push_back(compound_drought(a.wind, a.solar, opts.q).seasonal_counts);
    }
  }
  if (tree.empty()) throw Error(ErrorKind::ManifestError, "no members of group " + group + " in manifest");

  std::ostringstream os;
  os << provenance_line("sensitivity seed=" + std::to_string(opts.seed), opts,
                        "mean/std/max [drought days per member]; subset_size = samples per model");
  os << "dataset,period,model,subset_size,n_pooled,season,mean,std,max\n";
  auto emit = [&](const std::string& dataset, const Period& period, const std::string& model,
                  const std::vector<SensitivityRow>& rows) {
    for (const auto& row : rows) {
      for (Season s : kSeasons) {
        os << dataset << ',' << period.label() << ',' << model << ',' << row.subset_size << ',' << row.n_pooled << ','
           << to_string(s) << ',' << detail::fixed(row[s].mean, 4) << ',' << detail::fixed(row[s].std, 4) << ','
           << row[s].max << '\n';
      }
    }
  };
  for (const auto& [dataset, periods] : tree) {
    for (const auto& [period, models] : periods) {
      std::vector<std::vector<SeasonCounts>> strata;
      try {
        std::uint64_t stratum = 0;
        for (const auto& [model, samples] : models) {
          emit(dataset, period, model, sensitivity(samples, sizes, opts.seed + stratum++, opts.std_divisor));
          strata.push_back(samples);
        }
        emit(dataset, period, "ALL", sensitivity(strata, sizes, opts.seed, opts.std_divisor));
      } catch (const Error& e) {
        throw Error(e.kind(), dataset + " " + period.label() + ": " + e.what());
      }
    }
  }
  return os.str();
}

}  // namespace edrought::cli
