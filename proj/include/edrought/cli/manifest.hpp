#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace edrought::cli {

struct Period {
  int start_year = 0;
  int end_year = 0;

  auto operator<=>(const Period&) const = default;

  std::string label() const;
  static Period parse(const std::string& text);  // "2030-2039"
};

inline const std::vector<Period> kDefaultPeriods = {{2030, 2039}, {2090, 2099}};

// One ensemble member: a model run (GCM/RCM) or one emulator sample.
struct MemberKey {
  std::string group;       // GCM | RCM | EMULATED | REANALYSIS
  std::string generation;  // CMIP5 | CMIP6
  std::string model;
  std::string sample;

  auto operator<=>(const MemberKey&) const = default;

  // "Emulated CMIP5", "GCM CMIP6", ...
  std::string dataset() const;
  std::string id() const;  // model/sample, unique within a dataset
  std::string label() const;
  static MemberKey parse(const std::string& text);  // GROUP/GENERATION/MODEL/SAMPLE
};

struct VariablePaths {
  std::filesystem::path wind;
  std::filesystem::path solar;
};

struct Manifest {
  std::filesystem::path source;
  std::vector<Period> periods;
  std::map<MemberKey, std::map<Period, VariablePaths>> members;
};

// Parses and checks a manifest; paths are resolved against the manifest's
// directory. Throws Error(ManifestError) naming the offending member.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir,
                        const std::string& origin = "<manifest>");

}  // namespace edrought::cli
