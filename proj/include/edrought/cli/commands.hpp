#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edrought/cli/manifest.hpp"
#include "edrought/drought.hpp"
#include "edrought/ensemble.hpp"
#include "edrought/geo.hpp"

namespace edrought::cli {

struct RunOptions {
  RegionBounds bounds = RegionBounds::central_europe();
  double q = 0.2;
  Weighting weighting = Weighting::Uniform;
  StdDivisor std_divisor = StdDivisor::N;
  std::uint64_t seed = 0;

  // Throws InvalidQuantile / InvalidBounds. The CLI accepts 0 < q < 1 only.
  void check() const;
};

// Each command returns the complete CSV text, including its leading
// "# ..." provenance line. Rows are sorted by (group, generation, model,
// sample, period, season).
std::string cmd_counts(const Manifest& manifest, const RunOptions& opts);
std::string cmd_change(const Manifest& manifest, const RunOptions& opts, const Period& before, const Period& after);
std::string cmd_spatial(const Manifest& manifest, const RunOptions& opts, const MemberKey& member,
                        const Period& period);
std::string cmd_single_var(const Manifest& manifest, const RunOptions& opts, Variable variable);
std::string cmd_point(const Manifest& manifest, const RunOptions& opts, double lon, double lat);
std::string cmd_sensitivity(const Manifest& manifest, const RunOptions& opts, const std::vector<int>& sizes,
                            const std::string& group = "EMULATED");

// `# edrought <command>; q=...; weighting=...; quantile=...; ...` line.
std::string provenance_line(const std::string& command, const RunOptions& opts, const std::string& units);

}  // namespace edrought::cli
