// Regenerates the committed GSF1 fixture sets under a target directory:
//   <dir>/ensemble/  generator-based GCM + emulated ensemble, two periods
//   <dir>/planted/   planted-count groups with known period-to-period changes
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "edrought/gridstore.hpp"
#include "edrought/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace edrought;

namespace {

struct Member {
  std::string group;
  std::string generation;
  std::string model;
  std::string sample;
};

const std::vector<std::pair<int, int>> kPeriods = {{2030, 2039}, {2090, 2099}};

std::string period_label(const std::pair<int, int>& p) {
  return std::to_string(p.first) + "-" + std::to_string(p.second);
}

class ManifestWriter {
 public:
  explicit ManifestWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void add(const Member& m, const std::pair<int, int>& period, const synth::SynthPair& pair) {
    const std::string stem = m.group + "_" + m.generation + "_" + m.model + "_" + m.sample + "_" + period_label(period);
    for (const auto* ds : {&pair.wind, &pair.solar}) {
      const std::string file = stem + "_" + ds->variable + ".gsf";
      write_dataset(*ds, dir_ / file);
      datasets_.push_back({{"path", file},
                           {"group", m.group},
                           {"generation", m.generation},
                           {"model", m.model},
                           {"sample", m.sample},
                           {"period", period_label(period)},
                           {"variable", ds->variable}});
    }
  }

  void finish() const {
    nlohmann::ordered_json doc;
    doc["periods"] = {period_label(kPeriods[0]), period_label(kPeriods[1])};
    doc["datasets"] = datasets_;
    std::ofstream(dir_ / "manifest.json") << doc.dump(2) << "\n";
  }

 private:
  fs::path dir_;
  nlohmann::ordered_json datasets_ = nlohmann::ordered_json::array();
};

void write_ensemble(const fs::path& dir) {
  ManifestWriter out(dir);
  std::vector<Member> members = {
      {"GCM", "CMIP5", "GA", "0"}, {"GCM", "CMIP5", "GB", "0"}, {"GCM", "CMIP5", "GC", "0"},
      {"EMULATED", "CMIP5", "RA", "0"}, {"EMULATED", "CMIP5", "RA", "1"},
      {"EMULATED", "CMIP5", "RB", "0"}, {"EMULATED", "CMIP5", "RB", "1"},
  };
  std::uint64_t seed = 1000;
  for (std::size_t m = 0; m < members.size(); ++m) {
    for (std::size_t p = 0; p < kPeriods.size(); ++p) {
      synth::SynthConfig cfg;
      cfg.start_year = kPeriods[p].first;
      cfg.n_years = kPeriods[p].second - kPeriods[p].first + 1;
      cfg.calendar = members[m].group == "GCM" ? Calendar::NoLeap : Calendar::Standard;
      // 4 x 3 cells at odd multiples of 1.25 deg; the southern row lies
      // outside the default region.
      cfg.ny = 4;
      cfg.nx = 3;
      cfg.lat0 = 38.75;
      cfg.lon0 = 3.75;
      cfg.rho = 0.3;
      cfg.wind.mean = 5.0 - 0.3 * static_cast<double>(p) + 0.2 * static_cast<double>(m % 3);
      cfg.missing_fraction = members[m].group == "EMULATED" ? 0.02 : 0.0;
      cfg.seed = ++seed;
      out.add(members[m], kPeriods[p], synth::generate(cfg));
    }
  }
  out.finish();
}

void write_planted_groups(const fs::path& dir) {
  ManifestWriter out(dir);
  auto son = [](long n) {
    SeasonCounts c;
    c[Season::SON] = n;
    c[Season::DJF] = n + 5;
    return c;
  };
  // GCM CMIP5: autumn 3.0 -> 7.0 with every member rising by 4.
  const std::vector<std::pair<long, long>> gcm = {{2, 6}, {3, 7}, {4, 8}};
  // RCM CMIP5: autumn deltas +1, +1, -1, +1.
  const std::vector<std::pair<long, long>> rcm = {{3, 4}, {3, 4}, {3, 2}, {3, 4}};
  // GCM CMIP6: one member, unchanged.
  const std::vector<std::pair<long, long>> same = {{5, 5}};
  auto emit = [&](const std::string& group, const std::string& generation,
                  const std::vector<std::pair<long, long>>& rows) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Member m{group, generation, "M" + std::to_string(k + 1), "0"};
      out.add(m, kPeriods[0], synth::planted_pair(2030, 10, Calendar::NoLeap, son(rows[k].first)));
      out.add(m, kPeriods[1], synth::planted_pair(2090, 10, Calendar::NoLeap, son(rows[k].second)));
    }
  };
  emit("GCM", "CMIP5", gcm);
  emit("RCM", "CMIP5", rcm);
  emit("GCM", "CMIP6", same);
  out.finish();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures OUTPUT_DIR\n";
    return 1;
  }
  try {
    const fs::path root = argv[1];
    write_ensemble(root / "ensemble");
    write_planted_groups(root / "planted");
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
