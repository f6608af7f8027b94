#include "edrought/cli/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "edrought/error.hpp"
#include "json.hpp"

namespace edrought::cli {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw Error(ErrorKind::ManifestError, origin + ": " + what);
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw std::invalid_argument("expected a string or integer");
}

Period period_from(const nlohmann::json& v) {
  if (v.is_string()) return Period::parse(v.get<std::string>());
  if (v.is_array() && v.size() == 2) return {v.at(0).get<int>(), v.at(1).get<int>()};
  throw std::invalid_argument("period must be \"YYYY-YYYY\" or [start, end]");
}

const std::set<std::string> kGroups = {"GCM", "RCM", "EMULATED", "REANALYSIS"};

}  // namespace

std::string Period::label() const { return std::to_string(start_year) + "-" + std::to_string(end_year); }

Period Period::parse(const std::string& text) {
  Period p;
  char dash = 0;
  std::istringstream in(text);
  if (!(in >> p.start_year >> dash >> p.end_year) || dash != '-' || !in.eof() || p.end_year < p.start_year) {
    throw std::invalid_argument("bad period '" + text + "', expected YYYY-YYYY");
  }
  return p;
}

std::string MemberKey::dataset() const {
  std::string name = group;
  if (group == "EMULATED") name = "Emulated";
  if (group == "REANALYSIS") name = "Reanalysis";
  return generation.empty() ? name : name + " " + generation;
}

std::string MemberKey::id() const { return model + "/" + sample; }

std::string MemberKey::label() const { return group + "/" + generation + "/" + model + "/" + sample; }

MemberKey MemberKey::parse(const std::string& text) {
  MemberKey k;
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, '/')) parts.push_back(part);
  if (parts.size() != 4) throw std::invalid_argument("member must be GROUP/GENERATION/MODEL/SAMPLE, got '" + text + "'");
  return {parts[0], parts[1], parts[2], parts[3]};
}

Manifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir,
                        const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(origin, std::string("not valid JSON (") + e.what() + ")");
  }

  Manifest m;
  m.source = origin;
  try {
    if (doc.contains("periods")) {
      for (const auto& p : doc.at("periods")) m.periods.push_back(period_from(p));
    } else {
      m.periods = kDefaultPeriods;
    }
  } catch (const std::exception& e) {
    fail(origin, std::string("bad periods: ") + e.what());
  }
  if (m.periods.empty()) fail(origin, "no analysis periods");

  if (!doc.contains("datasets") || !doc.at("datasets").is_array()) fail(origin, "missing 'datasets' array");

  std::size_t n = 0;
  for (const auto& entry : doc.at("datasets")) {
    const std::string where = "datasets[" + std::to_string(n++) + "]";
    MemberKey key;
    Period period;
    std::string variable;
    std::filesystem::path path;
    try {
      key.group = entry.at("group").get<std::string>();
      key.generation = entry.contains("generation") ? entry.at("generation").get<std::string>() : std::string();
      key.model = scalar_text(entry.at("model"));
      key.sample = entry.contains("sample") ? scalar_text(entry.at("sample")) : std::string("0");
      period = period_from(entry.at("period"));
      variable = entry.at("variable").get<std::string>();
      path = entry.at("path").get<std::string>();
    } catch (const std::exception& e) {
      fail(origin, where + ": " + e.what());
    }
    if (!kGroups.count(key.group)) fail(origin, where + ": unknown group '" + key.group + "'");
    if (key.group != "REANALYSIS" && key.generation != "CMIP5" && key.generation != "CMIP6") {
      fail(origin, where + " (member " + key.label() + "): generation must be CMIP5 or CMIP6");
    }
    if (key.model.empty() || key.sample.empty() || key.model.find('/') != std::string::npos ||
        key.sample.find('/') != std::string::npos) {
      fail(origin, where + ": model and sample must be non-empty and free of '/'");
    }
    if (std::find(m.periods.begin(), m.periods.end(), period) == m.periods.end()) {
      fail(origin, where + " (member " + key.label() + "): period " + period.label() + " is not an analysis window");
    }
    if (path.is_relative()) path = base_dir / path;

    auto& slot = m.members[key][period];
    std::filesystem::path* target = nullptr;
    if (variable == "sfcWind") target = &slot.wind;
    if (variable == "rsds") target = &slot.solar;
    if (!target) fail(origin, where + " (member " + key.label() + "): variable must be sfcWind or rsds");
    if (!target->empty()) {
      fail(origin, "member " + key.label() + " period " + period.label() + " lists " + variable + " twice");
    }
    *target = path;
  }

  for (const auto& [key, periods] : m.members) {
    for (const auto& [period, paths] : periods) {
      if (paths.wind.empty()) fail(origin, "member " + key.label() + " period " + period.label() + " has no sfcWind entry");
      if (paths.solar.empty()) fail(origin, "member " + key.label() + " period " + period.label() + " has no rsds entry");
    }
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ManifestError, "cannot open manifest " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_manifest(text.str(), path.parent_path(), path.string());
}

}  // namespace edrought::cli
