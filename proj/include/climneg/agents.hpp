#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "climneg/common.hpp"
#include "climneg/engine.hpp"
#include "climneg/negotiation.hpp"

namespace climneg {

enum class PolicyKind { Selfish, Cooperative, AdaptiveThreshold, Random };

inline std::string policy_kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::Selfish: return "selfish";
    case PolicyKind::Cooperative: return "cooperative";
    case PolicyKind::AdaptiveThreshold: return "adaptive-threshold";
    case PolicyKind::Random: return "random";
  }
  throw InvariantError("unknown policy kind");
}

inline PolicyKind policy_kind_from_name(const std::string& name) {
  if (name == "selfish") return PolicyKind::Selfish;
  if (name == "cooperative") return PolicyKind::Cooperative;
  if (name == "adaptive-threshold") return PolicyKind::AdaptiveThreshold;
  if (name == "random") return PolicyKind::Random;
  throw ConfigError("unknown policy kind: " + name);
}

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Selfish;
  int target_level = 0;       // cooperative: level it pushes for
  double capacity_slope = 0;  // adaptive: max acceptable level = round(slope / theta1)
  std::uint64_t seed = 0;     // random: extra stream key

  void validate() const {
    if (target_level < 0 || target_level > kMaxLevel)
      throw ConfigError("policy target_level must lie in 0..10");
    if (!(capacity_slope >= 0)) throw ConfigError("policy capacity_slope must be non-negative");
  }
};

struct GroupView {
  int group_id = -1;
  std::array<int, 3> members = {-1, -1, -1};
  std::array<Action, 3> last_actions{};
};

// Read-only snapshot a policy sees when proposing, deciding or acting.
struct Observation {
  int region = -1;
  RegionParams params;
  RegionState state;
  ClimateState climate;
  Commitment commitment;  // floors carried in from the last evaluation stage
  GroupView group;        // populated in group modes only
};

struct PolicyProposal {
  int share_level = 0;
  std::array<GroupLevels, kNumGroups> outgoing{};  // own-group slot ignored
};

// Deterministic archetypes standing in for trained agents. The random kind
// draws from one substream per (episode, region, config seed), so episodes
// replay exactly.
class Policy {
 public:
  Policy() = default;

  Policy(PolicyConfig cfg, int region, std::uint64_t episode_seed)
      : cfg_(cfg),
        region_(region),
        rng_(substream_seed(splitmix64(episode_seed) ^ splitmix64(cfg.seed),
                            static_cast<std::uint64_t>(region))) {
    cfg_.validate();
  }

  const PolicyConfig& config() const { return cfg_; }

  int max_acceptable_level(double theta1) const {
    check(theta1 > 0, "adaptive policy needs positive theta1");
    auto lvl = static_cast<int>(std::llround(cfg_.capacity_slope / theta1));
    return std::clamp(lvl, 0, kMaxLevel);
  }

  PolicyProposal propose(const Observation& obs) {
    PolicyProposal out;
    switch (cfg_.kind) {
      case PolicyKind::Selfish:
        break;  // share 0, outgoing (0,0)
      case PolicyKind::Cooperative:
        out.share_level = cfg_.target_level;
        for (auto& lv : out.outgoing) lv = {cfg_.target_level, 5};
        break;
      case PolicyKind::AdaptiveThreshold: {
        int lvl = max_acceptable_level(obs.params.theta1);
        out.share_level = lvl;
        for (auto& lv : out.outgoing) lv = {lvl, 5};
        break;
      }
      case PolicyKind::Random:
        out.share_level = draw_level();
        for (auto& lv : out.outgoing) lv = {draw_level(), draw_level()};
        break;
    }
    return out;
  }

  bool decide(const Observation& obs, const Proposal& incoming) {
    incoming.validate();
    switch (cfg_.kind) {
      case PolicyKind::Selfish: return false;
      case PolicyKind::Cooperative: return true;
      case PolicyKind::AdaptiveThreshold:
        return incoming.mitigation_level <= max_acceptable_level(obs.params.theta1) &&
               incoming.savings_level <= 8;
      case PolicyKind::Random: return draw_accept();
    }
    throw InvariantError("unknown policy kind");
  }

  BilateralProposal propose_bilateral(const Observation& obs, int target) {
    BilateralProposal p;
    p.from = obs.region;
    p.to = target;
    switch (cfg_.kind) {
      case PolicyKind::Selfish:
        break;
      case PolicyKind::Cooperative:
        p.self_level = cfg_.target_level;
        p.other_level = cfg_.target_level;
        break;
      case PolicyKind::AdaptiveThreshold: {
        int lvl = max_acceptable_level(obs.params.theta1);
        p.self_level = lvl;
        p.other_level = lvl;
        break;
      }
      case PolicyKind::Random:
        p.self_level = draw_level();
        p.other_level = draw_level();
        break;
    }
    p.validate();
    return p;
  }

  bool decide_bilateral(const Observation& obs, const BilateralProposal& incoming) {
    incoming.validate();
    check(incoming.to == obs.region, "bilateral decision must come from the recipient");
    switch (cfg_.kind) {
      case PolicyKind::Selfish: return false;
      case PolicyKind::Cooperative: return true;
      case PolicyKind::AdaptiveThreshold:
        return incoming.other_level <= max_acceptable_level(obs.params.theta1);
      case PolicyKind::Random: return draw_accept();
    }
    throw InvariantError("unknown policy kind");
  }

  // Preferred rates lifted to the committed floors.
  Action act(const Observation& obs) {
    double mu = 0, s = 0;
    switch (cfg_.kind) {
      case PolicyKind::Selfish:
        mu = 0.0;
        s = 0.2;
        break;
      case PolicyKind::Cooperative:
        mu = level_to_rate(static_cast<double>(cfg_.target_level));
        s = 0.25;
        break;
      case PolicyKind::AdaptiveThreshold:
        mu = 0.5 * level_to_rate(static_cast<double>(max_acceptable_level(obs.params.theta1)));
        s = 0.2;
        break;
      case PolicyKind::Random:
        mu = draw_unit();
        s = draw_unit();
        break;
    }
    Action a;
    a.mitigation = std::max(mu, obs.commitment.min_mitigation);
    a.savings = std::max(s, obs.commitment.min_savings);
    return a;
  }

 private:
  PolicyConfig cfg_;
  int region_ = -1;
  std::mt19937_64 rng_;

  int draw_level() { return std::uniform_int_distribution<int>(0, kMaxLevel)(rng_); }
  bool draw_accept() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }
  double draw_unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
};

}  // namespace climneg
