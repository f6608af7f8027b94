// edrought: compound wind/solar drought analysis over GSF1 ensembles.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "edrought/cli/commands.hpp"
#include "edrought/cli/manifest.hpp"
#include "edrought/error.hpp"
#include "edrought/gridstore.hpp"
#include "edrought/synth.hpp"

namespace {

using edrought::Error;
using edrought::ErrorKind;

constexpr int kExitUsage = 1;
constexpr int kExitManifest = 2;
constexpr int kExitData = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ManifestError:
    case ErrorKind::MemberMismatch:
    case ErrorKind::SubsetTooLarge:
      return kExitManifest;
    case ErrorKind::InvalidQuantile:
    case ErrorKind::InvalidBounds:
    case ErrorKind::InvalidConfig:
      return kExitUsage;
    default:
      return kExitData;
  }
}

edrought::RegionBounds parse_bounds(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidBounds, "cannot parse '" + text + "'");
    }
  }
  if (v.size() != 4) throw Error(ErrorKind::InvalidBounds, "expected LONMIN,LONMAX,LATMIN,LATMAX");
  edrought::RegionBounds b{v[0], v[1], v[2], v[3]};
  b.check();
  return b;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + out_path + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + out_path);
}

struct Common {
  std::string manifest;
  std::string bounds;
  double q = 0.2;
  std::string weighting = "uniform";
  std::string std_divisor = "n";
  std::string out;
  std::uint64_t seed = 0;

  edrought::cli::RunOptions options() const {
    edrought::cli::RunOptions o;
    if (!bounds.empty()) o.bounds = parse_bounds(bounds);
    o.q = q;
    o.weighting = edrought::parse_weighting(weighting);
    o.std_divisor = edrought::parse_std_divisor(std_divisor);
    o.seed = seed;
    o.check();
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--manifest", c.manifest, "Ensemble manifest (JSON)")->required();
  cmd->add_option("--bounds", c.bounds, "Region LONMIN,LONMAX,LATMIN,LATMAX (default: Central Europe)");
  cmd->add_option("--quantile", c.q, "Threshold quantile level, 0 < q < 1")->capture_default_str();
  cmd->add_option("--weighting", c.weighting, "Spatial mean weighting: uniform|coslat")->capture_default_str();
  cmd->add_option("--std-divisor", c.std_divisor, "Standard deviation divisor: n|n-1")->capture_default_str();
  cmd->add_option("--out", c.out, "Output path (default: stdout)");
  cmd->add_option("--seed", c.seed, "Seed for sample ordering")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compound low-wind / low-solar drought analysis for climate ensembles"};
  app.require_subcommand(1);

  Common common;
  std::string periods_text = "2030-2039,2090-2099";
  std::string member_text;
  std::string period_text = "2030-2039";
  std::string variable_text = "sfcWind";
  std::string sizes_text = "10,50";
  std::string group_text = "EMULATED";
  double lon = 0.0, lat = 0.0;

  auto* counts = app.add_subcommand("counts", "Per-member seasonal compound drought counts");
  add_common(counts, common);

  auto* change = app.add_subcommand("change", "Table of period-to-period ensemble changes");
  add_common(change, common);
  change->add_option("--periods", periods_text, "BEFORE,AFTER periods as YYYY-YYYY")->capture_default_str();

  auto* spatial = app.add_subcommand("spatial", "Per-cell drought map for one member");
  add_common(spatial, common);
  spatial->add_option("--member", member_text, "GROUP/GENERATION/MODEL/SAMPLE")->required();
  spatial->add_option("--period", period_text, "YYYY-YYYY")->capture_default_str();

  auto* single = app.add_subcommand("single-var", "Seasonal single-variable drought counts");
  add_common(single, common);
  single->add_option("--variable", variable_text, "sfcWind|rsds")->capture_default_str();

  auto* point = app.add_subcommand("point", "Drought counts at the grid cell nearest a location");
  add_common(point, common);
  point->add_option("--lon", lon, "Longitude [deg E]")->required();
  point->add_option("--lat", lat, "Latitude [deg N]")->required();

  auto* sens = app.add_subcommand("sensitivity", "Sample-size sensitivity of ensemble statistics");
  add_common(sens, common);
  sens->add_option("--sizes", sizes_text, "Comma-separated samples-per-model subset sizes")->capture_default_str();
  sens->add_option("--group", group_text, "Member group to analyse")->capture_default_str();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a GSF1 file against the format invariants");
  validate->add_option("path", validate_path, "GSF1 file")->required();

  edrought::synth::SynthConfig synth_cfg;
  std::string calendar_text = "standard";
  std::string wind_out, solar_out;
  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic wind/solar GSF1 pair");
  synth->add_option("--seed", synth_cfg.seed)->capture_default_str();
  synth->add_option("--rho", synth_cfg.rho, "Wind/solar noise correlation")->capture_default_str();
  synth->add_option("--start-year", synth_cfg.start_year)->capture_default_str();
  synth->add_option("--years", synth_cfg.n_years)->capture_default_str();
  synth->add_option("--ny", synth_cfg.ny)->capture_default_str();
  synth->add_option("--nx", synth_cfg.nx)->capture_default_str();
  synth->add_option("--calendar", calendar_text, "standard|noleap|360_day")->capture_default_str();
  synth->add_option("--wind-out", wind_out)->required();
  synth->add_option("--solar-out", solar_out)->required();

  CLI11_PARSE(app, argc, argv);

  using namespace edrought::cli;
  try {
    if (*validate) {
      std::ifstream in(validate_path, std::ios::binary);
      if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + validate_path);
      const auto ds = edrought::read_dataset(validate_path);
      std::cout << validate_path << ": ok (" << ds.variable << ", nt=" << ds.nt() << ", ny=" << ds.ny()
                << ", nx=" << ds.nx() << ", calendar=" << edrought::to_string(ds.calendar) << ")\n";
      return 0;
    }
    if (*synth) {
      synth_cfg.calendar = edrought::parse_calendar(calendar_text);
      const auto pair = edrought::synth::generate(synth_cfg);
      edrought::write_dataset(pair.wind, wind_out);
      edrought::write_dataset(pair.solar, solar_out);
      return 0;
    }

    const RunOptions opts = common.options();
    const Manifest manifest = load_manifest(common.manifest);
    std::string text;
    if (*counts) {
      text = cmd_counts(manifest, opts);
    } else if (*change) {
      const auto comma = periods_text.find(',');
      if (comma == std::string::npos) throw Error(ErrorKind::InvalidConfig, "--periods needs BEFORE,AFTER");
      Period before, after;
      try {
        before = Period::parse(periods_text.substr(0, comma));
        after = Period::parse(periods_text.substr(comma + 1));
      } catch (const std::invalid_argument& e) {
        throw Error(ErrorKind::InvalidConfig, e.what());
      }
      text = cmd_change(manifest, opts, before, after);
    } else if (*spatial) {
      MemberKey member;
      Period period;
      try {
        member = MemberKey::parse(member_text);
        period = Period::parse(period_text);
      } catch (const std::invalid_argument& e) {
        throw Error(ErrorKind::InvalidConfig, e.what());
      }
      text = cmd_spatial(manifest, opts, member, period);
    } else if (*single) {
      text = cmd_single_var(manifest, opts, edrought::parse_variable(variable_text));
    } else if (*point) {
      text = cmd_point(manifest, opts, lon, lat);
    } else if (*sens) {
      std::vector<int> sizes;
      std::stringstream in(sizes_text);
      std::string item;
      while (std::getline(in, item, ',')) {
        try {
          sizes.push_back(std::stoi(item));
        } catch (const std::exception&) {
          throw Error(ErrorKind::InvalidConfig, "bad --sizes entry '" + item + "'");
        }
      }
      text = cmd_sensitivity(manifest, opts, sizes, group_text);
    }
    emit(text, common.out);
    return 0;
  } catch (const Error& e) {
    std::cerr << "edrought: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "edrought: " << e.what() << "\n";
    return kExitData;
  }
}
