#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "climneg/agents.hpp"
#include "climneg/round.hpp"

using namespace climneg;

namespace {

Observation obs_with_theta(double theta1) {
  Observation obs;
  obs.region = 0;
  obs.params.id = 0;
  obs.params.A0 = 1.0;
  obs.params.L0 = 10.0;
  obs.params.K0 = 5.0;
  obs.params.theta1 = theta1;
  return obs;
}

Proposal proposal(int mit, int sav) {
  Proposal p;
  p.from_group = 1;
  p.to_group = 0;
  p.mitigation_level = mit;
  p.savings_level = sav;
  return p;
}

}  // namespace

TEST_CASE("selfish policies defect everywhere") {
  Policy p({PolicyKind::Selfish, 0, 0, 0}, 0, 1);
  Observation obs = obs_with_theta(0.1);
  auto pp = p.propose(obs);
  CHECK(pp.share_level == 0);
  for (const auto& lv : pp.outgoing) {
    CHECK(lv.mitigation == 0);
    CHECK(lv.savings == 0);
  }
  CHECK_FALSE(p.decide(obs, proposal(0, 0)));
  CHECK_FALSE(p.decide(obs, proposal(10, 10)));

  auto a = p.act(obs);
  CHECK(a.mitigation == 0.0);
  CHECK(a.savings == 0.2);

  obs.commitment = {0, 0.7, 0.5};
  a = p.act(obs);
  CHECK(a.mitigation == 0.7);
  CHECK(a.savings == 0.5);
}

TEST_CASE("cooperative policies echo their target and accept everything") {
  Policy p({PolicyKind::Cooperative, 8, 0, 0}, 3, 1);
  Observation obs = obs_with_theta(0.1);
  obs.region = 3;
  auto pp = p.propose(obs);
  CHECK(pp.share_level == 8);
  for (const auto& lv : pp.outgoing) {
    CHECK(lv.mitigation == 8);
    CHECK(lv.savings == 5);
  }
  CHECK(p.decide(obs, proposal(10, 10)));

  obs.commitment = {3, 0.3, 0.0};
  auto a = p.act(obs);
  CHECK(a.mitigation == 0.8);
  CHECK(a.savings == 0.25);
}

TEST_CASE("adaptive policies accept up to their capacity threshold") {
  Policy p({PolicyKind::AdaptiveThreshold, 0, 0.3, 0}, 0, 1);
  Observation obs = obs_with_theta(0.05);
  CHECK(p.max_acceptable_level(0.05) == 6);  // round(0.3 / 0.05)
  CHECK(p.propose(obs).share_level == 6);
  CHECK(p.propose(obs).outgoing[3].mitigation == 6);

  CHECK(p.decide(obs, proposal(5, 4)));
  CHECK(p.decide(obs, proposal(6, 8)));
  CHECK_FALSE(p.decide(obs, proposal(7, 0)));
  CHECK_FALSE(p.decide(obs, proposal(5, 9)));  // savings ask too steep

  auto a = p.act(obs);
  CHECK_THAT(a.mitigation, Catch::Matchers::WithinAbs(0.3, 1e-12));  // half of 6/10

  // Cheap abatement widens what it will take on, capped at 10.
  Policy loose({PolicyKind::AdaptiveThreshold, 0, 5.0, 0}, 0, 1);
  CHECK(loose.max_acceptable_level(0.05) == 10);
}

TEST_CASE("random policies replay exactly under the same seeds") {
  Observation obs = obs_with_theta(0.1);
  Policy a({PolicyKind::Random, 0, 0, 7}, 4, 123);
  Policy b({PolicyKind::Random, 0, 0, 7}, 4, 123);
  for (int i = 0; i < 50; ++i) {
    auto pa = a.propose(obs);
    auto pb = b.propose(obs);
    CHECK(pa.share_level == pb.share_level);
    for (int g = 0; g < kNumGroups; ++g) {
      CHECK(pa.outgoing[g].mitigation == pb.outgoing[g].mitigation);
      CHECK(pa.outgoing[g].savings == pb.outgoing[g].savings);
    }
    CHECK(a.decide(obs, proposal(5, 5)) == b.decide(obs, proposal(5, 5)));
    auto aa = a.act(obs);
    auto ab = b.act(obs);
    CHECK(aa.mitigation == ab.mitigation);
    CHECK(aa.savings == ab.savings);
  }
}

TEST_CASE("random streams differ across regions and episode seeds") {
  Observation obs = obs_with_theta(0.1);
  Policy base({PolicyKind::Random, 0, 0, 0}, 1, 5);
  Policy other_region({PolicyKind::Random, 0, 0, 0}, 2, 5);
  Policy other_seed({PolicyKind::Random, 0, 0, 0}, 1, 6);
  int diff_region = 0, diff_seed = 0;
  for (int i = 0; i < 40; ++i) {
    int v = base.propose(obs).share_level;
    if (v != other_region.propose(obs).share_level) ++diff_region;
    if (v != other_seed.propose(obs).share_level) ++diff_seed;
  }
  CHECK(diff_region > 0);
  CHECK(diff_seed > 0);
}

TEST_CASE("every policy kind honors its commitment floors") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PolicyConfig> configs = {
      {PolicyKind::Selfish, 0, 0, 0},
      {PolicyKind::Cooperative, 6, 0, 0},
      {PolicyKind::AdaptiveThreshold, 0, 0.4, 0},
      {PolicyKind::Random, 0, 0, 3},
  };
  for (const auto& cfg : configs) {
    Policy p(cfg, 2, 77);
    for (int i = 0; i < 200; ++i) {
      Observation obs = obs_with_theta(0.08);
      obs.region = 2;
      obs.commitment = {2, u(rng), u(rng)};
      auto a = p.act(obs);
      CHECK(a.mitigation >= obs.commitment.min_mitigation);
      CHECK(a.savings >= obs.commitment.min_savings);
      CHECK(a.mitigation <= 1.0);
      CHECK(a.savings <= 1.0);
    }
  }
}

TEST_CASE("policy config validation") {
  PolicyConfig bad{PolicyKind::Cooperative, 11, 0, 0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  PolicyConfig neg{PolicyKind::AdaptiveThreshold, 0, -1.0, 0};
  CHECK_THROWS_AS(neg.validate(), ConfigError);
  CHECK(policy_kind_from_name("adaptive-threshold") == PolicyKind::AdaptiveThreshold);
  CHECK_THROWS_AS(policy_kind_from_name("bogus"), ConfigError);
  CHECK(policy_kind_name(PolicyKind::Random) == "random");
}

TEST_CASE("bilateral proposing and deciding follow the same archetypes") {
  Observation obs = obs_with_theta(0.05);
  Policy coop({PolicyKind::Cooperative, 7, 0, 0}, 0, 1);
  auto p = coop.propose_bilateral(obs, 5);
  CHECK(p.from == 0);
  CHECK(p.to == 5);
  CHECK(p.self_level == 7);
  CHECK(p.other_level == 7);

  Policy adaptive({PolicyKind::AdaptiveThreshold, 0, 0.3, 0}, 9, 1);
  Observation obs9 = obs_with_theta(0.05);
  obs9.region = 9;
  BilateralProposal ask{0, 9, 2, 6};
  CHECK(adaptive.decide_bilateral(obs9, ask));
  ask.other_level = 7;
  CHECK_FALSE(adaptive.decide_bilateral(obs9, ask));

  BilateralProposal misrouted{0, 5, 2, 6};
  CHECK_THROWS_AS(adaptive.decide_bilateral(obs9, misrouted), InvariantError);
}
