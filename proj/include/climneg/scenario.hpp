#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "climneg/agents.hpp"
#include "climneg/calibration.hpp"
#include "climneg/common.hpp"
#include "climneg/metrics.hpp"
#include "climneg/round.hpp"

namespace climneg {

enum class Scenario { None, Bilateral, StaticMitigation, StaticMitigationSaving, Dynamic };

inline constexpr std::array<const char*, 5> kScenarioNames = {
    "none", "bilateral", "static-mitigation", "static-mitigation-saving", "dynamic"};

inline std::string scenario_name(Scenario s) { return kScenarioNames[static_cast<int>(s)]; }

inline Scenario scenario_from_name(const std::string& name) {
  for (size_t i = 0; i < kScenarioNames.size(); ++i)
    if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
  throw ConfigError("unknown scenario '" + name +
                    "' (expected none, bilateral, static-mitigation, "
                    "static-mitigation-saving or dynamic)");
}

inline NegotiationMode scenario_mode(Scenario s) {
  switch (s) {
    case Scenario::None: return NegotiationMode::None;
    case Scenario::Bilateral: return NegotiationMode::Bilateral;
    case Scenario::StaticMitigation:
    case Scenario::StaticMitigationSaving: return NegotiationMode::StaticGroup;
    case Scenario::Dynamic: return NegotiationMode::DynamicGroup;
  }
  throw InvariantError("unknown scenario");
}

inline NegotiationVariant scenario_variant(Scenario s) {
  return s == Scenario::StaticMitigationSaving || s == Scenario::Dynamic
             ? NegotiationVariant::MitigationSavings
             : NegotiationVariant::MitigationOnly;
}

struct ScenarioConfig {
  Scenario scenario = Scenario::None;
  int horizon = 20;
  double dt = 5.0;
  std::string calibration = "synthetic";   // "synthetic", "synthetic:<n>" or a CSV path
  std::string policy_map = "paper-table";  // preset name or a CSV path
  double similarity_threshold = 0.1;
  int inconsistency_threshold = 18;
  IndexAnchors anchors;
  std::uint64_t seed = 0;

  void validate() const {
    if (horizon < 1) throw ConfigError("horizon must be at least 1 step");
    if (!(dt > 0)) throw ConfigError("dt must be positive");
    if (!(similarity_threshold > 0)) throw ConfigError("similarity_threshold must be positive");
    if (inconsistency_threshold < 1) throw ConfigError("inconsistency_threshold must be positive");
    anchors.validate();
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                                const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) ok = true;
    if (!ok) throw ConfigError("unknown config key '" + item.key() + "' in " + where);
  }
}

template <typename T>
inline void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  detail::reject_unknown_keys(j,
                              {"scenario", "horizon", "dt", "calibration", "policy_map",
                               "similarity_threshold", "inconsistency_threshold", "anchors",
                               "seed"},
                              "config");
  ScenarioConfig cfg;
  if (j.contains("scenario")) {
    std::string name;
    detail::read_field(j, "scenario", name);
    cfg.scenario = scenario_from_name(name);
  }
  detail::read_field(j, "horizon", cfg.horizon);
  detail::read_field(j, "dt", cfg.dt);
  detail::read_field(j, "calibration", cfg.calibration);
  detail::read_field(j, "policy_map", cfg.policy_map);
  detail::read_field(j, "similarity_threshold", cfg.similarity_threshold);
  detail::read_field(j, "inconsistency_threshold", cfg.inconsistency_threshold);
  if (j.contains("anchors")) {
    const auto& a = j.at("anchors");
    if (!a.is_object()) throw ConfigError("config key 'anchors' must be an object");
    detail::reject_unknown_keys(a, {"temp_zero", "temp_one", "output_scale"}, "anchors");
    detail::read_field(a, "temp_zero", cfg.anchors.temp_zero);
    detail::read_field(a, "temp_one", cfg.anchors.temp_one);
    detail::read_field(a, "output_scale", cfg.anchors.output_scale);
  }
  detail::read_field(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  return nlohmann::json{
      {"scenario", scenario_name(cfg.scenario)},
      {"horizon", cfg.horizon},
      {"dt", cfg.dt},
      {"calibration", cfg.calibration},
      {"policy_map", cfg.policy_map},
      {"similarity_threshold", cfg.similarity_threshold},
      {"inconsistency_threshold", cfg.inconsistency_threshold},
      {"anchors",
       {{"temp_zero", cfg.anchors.temp_zero},
        {"temp_one", cfg.anchors.temp_one},
        {"output_scale", cfg.anchors.output_scale}}},
      {"seed", cfg.seed},
  };
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

// Calibration spec: "synthetic" keys the generator off the episode seed,
// "synthetic:<n>" pins it, anything else is a CSV path.
inline std::vector<RegionParams> resolve_calibration(const std::string& spec,
                                                     std::uint64_t seed) {
  if (spec == "synthetic") return synthetic_calibration(seed);
  if (spec.rfind("synthetic:", 0) == 0) {
    std::string num = spec.substr(10);
    try {
      size_t pos = 0;
      std::uint64_t n = std::stoull(num, &pos);
      if (pos != num.size()) throw std::invalid_argument(num);
      return synthetic_calibration(n);
    } catch (const std::exception&) {
      throw ConfigError("bad synthetic calibration seed in '" + spec + "'");
    }
  }
  return load_calibration_csv(spec);
}

using PolicyMap = std::array<PolicyConfig, kNumRegions>;

inline constexpr std::array<const char*, 6> kPolicyPresetNames = {
    "paper-table",     "uniform-cooperative", "uniform-selfish",
    "uniform-adaptive", "uniform-random",     "full-mitigation"};

// Mixed preset: capital-rich regions push for strong mitigation, populous
// regions accept what their abatement costs allow, small regions split into
// defectors, coin-flippers and cautious adapters.
inline std::optional<PolicyMap> policy_preset(const std::string& name) {
  PolicyMap map{};
  auto fill = [&](PolicyKind kind, int target, double slope) {
    for (auto& p : map) p = {kind, target, slope, 0};
  };
  if (name == "paper-table") {
    for (int id : kHighCapitalIds) map[id] = {PolicyKind::Cooperative, 8, 0, 0};
    for (int id : kHighPopulationIds) map[id] = {PolicyKind::AdaptiveThreshold, 0, 0.35, 0};
    for (int id : {2, 6, 18, 12, 15}) map[id] = {PolicyKind::Selfish, 0, 0, 0};
    for (int id : {22, 21}) map[id] = {PolicyKind::Random, 0, 0, 0};
    for (int id : {23, 0}) map[id] = {PolicyKind::AdaptiveThreshold, 0, 0.25, 0};
    return map;
  }
  if (name == "uniform-cooperative") return fill(PolicyKind::Cooperative, 8, 0), map;
  if (name == "uniform-selfish") return fill(PolicyKind::Selfish, 0, 0), map;
  if (name == "uniform-adaptive") return fill(PolicyKind::AdaptiveThreshold, 0, 0.35), map;
  if (name == "uniform-random") return fill(PolicyKind::Random, 0, 0), map;
  if (name == "full-mitigation") return fill(PolicyKind::Cooperative, 10, 0), map;
  return std::nullopt;
}

inline constexpr const char* kPolicyMapHeader = "id,kind,target_level,capacity_slope,seed";

inline PolicyMap load_policy_map_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open policy map file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty policy map file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPolicyMapHeader)
    throw ConfigError("policy map header must be '" + std::string(kPolicyMapHeader) + "', got '" +
                      line + "'");
  PolicyMap map{};
  std::array<bool, kNumRegions> seen{};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 5)
      throw ConfigError("policy map row needs 5 fields, got " + std::to_string(f.size()));
    int id = detail::parse_int(f[0], path);
    if (id < 0 || id >= kNumRegions)
      throw ConfigError("policy map region id out of range: " + std::to_string(id));
    if (seen[id]) throw ConfigError("duplicate policy map region id: " + std::to_string(id));
    seen[id] = true;
    PolicyConfig p;
    p.kind = policy_kind_from_name(f[1]);
    p.target_level = detail::parse_int(f[2], path);
    p.capacity_slope = detail::parse_double(f[3], path);
    p.seed = detail::parse_uint64(f[4], path);
    p.validate();
    map[id] = p;
  }
  for (int id = 0; id < kNumRegions; ++id)
    if (!seen[id]) throw ConfigError("policy map missing region id " + std::to_string(id));
  return map;
}

inline void save_policy_map_csv(const PolicyMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write policy map file: " + path);
  out << kPolicyMapHeader << "\n";
  for (int id = 0; id < kNumRegions; ++id) {
    const auto& p = map[id];
    out << id << ',' << policy_kind_name(p.kind) << ',' << p.target_level << ','
        << format_double(p.capacity_slope) << ',' << p.seed << "\n";
  }
}

inline PolicyMap resolve_policy_map(const std::string& spec) {
  if (auto preset = policy_preset(spec)) return *preset;
  std::ifstream probe(spec);
  if (!probe) {
    std::string names;
    for (const char* n : kPolicyPresetNames) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw ConfigError("policy map '" + spec + "' is neither a readable file nor a preset (" +
                      names + ")");
  }
  probe.close();
  return load_policy_map_csv(spec);
}

}  // namespace climneg
