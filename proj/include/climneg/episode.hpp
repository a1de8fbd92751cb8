#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "climneg/agents.hpp"
#include "climneg/common.hpp"
#include "climneg/engine.hpp"
#include "climneg/grouping.hpp"
#include "climneg/metrics.hpp"
#include "climneg/negotiation.hpp"
#include "climneg/round.hpp"
#include "climneg/scenario.hpp"

namespace climneg {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RegionParams, id, A0, gA, L0, gL, K0, sigma0, gSigma, theta1,
                                   gamma, delta)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RegionState, capital, productivity, population, intensity,
                                   mitigation_rate, savings_rate, last_gross_output,
                                   last_net_output, last_emissions)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClimateState, carbon_stock, temperature)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(World, regions, climate)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Action, mitigation, savings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Proposal, from_group, to_group, mitigation_level,
                                   savings_level)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GroupLevels, mitigation, savings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Commitment, region, min_mitigation, min_savings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ShareVector, group, shares)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VoteRecord, proposal, voters, decisions, accepted)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BilateralProposal, from, to, self_level, other_level)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RoundResult, commitments, votes, group_levels,
                                   share_proposals, shares, bilateral_proposals,
                                   bilateral_decisions)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SwapEvent, region_a, region_b, group_a, group_b)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InconsistencyLedger, counts, threshold, pool)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Partition, groups, generation)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EpisodeMetrics, temp_rise, gross_output, climate_index,
                                   econ_index, hv_contribution)

inline void to_json(nlohmann::json& j, const PolicyConfig& p) {
  j = {{"kind", policy_kind_name(p.kind)},
       {"target_level", p.target_level},
       {"capacity_slope", p.capacity_slope},
       {"seed", p.seed}};
}

inline void from_json(const nlohmann::json& j, PolicyConfig& p) {
  p.kind = policy_kind_from_name(j.at("kind").get<std::string>());
  j.at("target_level").get_to(p.target_level);
  j.at("capacity_slope").get_to(p.capacity_slope);
  j.at("seed").get_to(p.seed);
}

inline std::string output_basis_name(OutputBasis b) {
  return b == OutputBasis::Net ? "net" : "gross";
}

inline OutputBasis output_basis_from_name(const std::string& name) {
  if (name == "net") return OutputBasis::Net;
  if (name == "gross") return OutputBasis::Gross;
  throw ConfigError("unknown output basis '" + name + "' (expected net or gross)");
}

struct StepRecord {
  int step = 0;
  RoundResult round;
  std::vector<Action> actions;
  World world;  // after the step
  std::vector<SwapEvent> swaps;
  InconsistencyLedger ledger;  // after the updating stage
  Partition partition;         // after the updating stage
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StepRecord, step, round, actions, world, swaps, ledger,
                                   partition)

struct RunRecord {
  ScenarioConfig config;
  OutputBasis output_basis = OutputBasis::Net;
  std::vector<RegionParams> calibration;
  PolicyMap policies{};
  Partition initial_partition;
  World start_world;
  std::vector<StepRecord> steps;
  EpisodeMetrics metrics;
};

inline SimParams sim_params_for(const ScenarioConfig& cfg,
                                std::vector<RegionParams> calibration) {
  SimParams p;
  p.regions = std::move(calibration);
  p.climate.step_years = cfg.dt;
  p.climate.horizon = cfg.horizon;
  return p;
}

inline std::array<RegionIndicators, kNumRegions> indicators_for(const World& world) {
  check(world.regions.size() == static_cast<size_t>(kNumRegions), "world needs 27 regions");
  std::array<RegionIndicators, kNumRegions> out;
  for (int r = 0; r < kNumRegions; ++r)
    out[r] = {world.regions[r].population, world.regions[r].capital};
  return out;
}

// Similarity scales track the current largest region, so the threshold reads
// as a fraction of the widest spread present.
inline SimilarityConfig similarity_config_for(const World& world, double threshold) {
  double max_pop = 0, max_cap = 0;
  for (const auto& r : world.regions) {
    max_pop = std::max(max_pop, r.population);
    max_cap = std::max(max_cap, r.capital);
  }
  SimilarityConfig cfg;
  cfg.pop_scale = max_pop > 0 ? max_pop : 1.0;
  cfg.cap_scale = max_cap > 0 ? max_cap : 1.0;
  cfg.threshold = threshold;
  return cfg;
}

namespace detail {

inline std::array<Observation, kNumRegions> make_observations(
    const World& world, const SimParams& params, const Partition& partition,
    NegotiationMode mode, const std::array<Commitment, kNumRegions>& commitments,
    const std::vector<Action>& last_actions) {
  std::array<Observation, kNumRegions> obs;
  for (int r = 0; r < kNumRegions; ++r) {
    obs[r].region = r;
    obs[r].params = params.regions[r];
    obs[r].state = world.regions[r];
    obs[r].climate = world.climate;
    obs[r].commitment = commitments[r];
  }
  if (mode == NegotiationMode::StaticGroup || mode == NegotiationMode::DynamicGroup) {
    for (int g = 0; g < kNumGroups; ++g)
      for (int i = 0; i < 3; ++i) {
        int r = partition.groups[g][i];
        obs[r].group.group_id = g;
        obs[r].group.members = partition.groups[g];
        for (int k = 0; k < 3; ++k)
          obs[r].group.last_actions[k] = last_actions[partition.groups[g][k]];
      }
  }
  return obs;
}

}  // namespace detail

// One full episode: per step a proposal stage, an evaluation stage, an action
// stage (policies lifted to their committed floors, then the world step) and,
// in the dynamic scenario only, the group updating stage.
inline RunRecord run_episode(const ScenarioConfig& cfg, OutputBasis basis = OutputBasis::Net,
                             const std::optional<Partition>& initial = std::nullopt) {
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;
  rec.output_basis = basis;
  rec.calibration = resolve_calibration(cfg.calibration, cfg.seed);
  rec.policies = resolve_policy_map(cfg.policy_map);

  const NegotiationMode mode = scenario_mode(cfg.scenario);
  const NegotiationVariant variant = scenario_variant(cfg.scenario);
  const SimParams params = sim_params_for(cfg, rec.calibration);

  Partition partition = initial ? *initial : seed_partition();
  partition.validate();
  rec.initial_partition = partition;

  InconsistencyLedger ledger;
  ledger.threshold = cfg.inconsistency_threshold;

  std::array<Policy, kNumRegions> policies;
  for (int r = 0; r < kNumRegions; ++r) policies[r] = Policy(rec.policies[r], r, cfg.seed);

  World world = initial_world(params);
  rec.start_world = world;

  std::array<Commitment, kNumRegions> commitments{};
  for (int r = 0; r < kNumRegions; ++r) commitments[r].region = r;
  std::vector<Action> last_actions(kNumRegions);

  std::vector<ClimateState> climate_trajectory{world.climate};
  std::vector<std::vector<double>> outputs;
  rec.steps.reserve(cfg.horizon);

  for (int step = 0; step < cfg.horizon; ++step) {
    auto obs = detail::make_observations(world, params, partition, mode, commitments,
                                         last_actions);
    StepRecord sr;
    sr.step = step;
    sr.round = run_negotiation_round(mode, variant, policies, obs, partition);

    sr.actions.resize(kNumRegions);
    for (int r = 0; r < kNumRegions; ++r) {
      obs[r].commitment = sr.round.commitments[r];
      sr.actions[r] = policies[r].act(obs[r]);
      check(sr.actions[r].mitigation >= sr.round.commitments[r].min_mitigation &&
                sr.actions[r].savings >= sr.round.commitments[r].min_savings,
            "action violates its commitment");
    }

    world = step_world(world, sr.actions, params);
    sr.world = world;
    climate_trajectory.push_back(world.climate);
    outputs.emplace_back();
    outputs.back().reserve(kNumRegions);
    for (const auto& rs : world.regions)
      outputs.back().push_back(basis == OutputBasis::Net ? rs.last_net_output
                                                         : rs.last_gross_output);

    if (mode == NegotiationMode::DynamicGroup) {
      ledger = record_inconsistencies(ledger, decision_records(sr.round.votes));
      auto upd = update_groups(partition, ledger, indicators_for(world),
                               similarity_config_for(world, cfg.similarity_threshold));
      partition = upd.partition;
      ledger = upd.ledger;
      sr.swaps = upd.swaps;
    }
    sr.ledger = ledger;
    sr.partition = partition;

    commitments = sr.round.commitments;
    last_actions = sr.actions;
    rec.steps.push_back(std::move(sr));
  }

  rec.metrics = compute_metrics(climate_trajectory, outputs, cfg.anchors);
  return rec;
}

inline nlohmann::json run_record_to_json(const RunRecord& rec) {
  return nlohmann::json{
      {"config", config_to_json(rec.config)},
      {"output_basis", output_basis_name(rec.output_basis)},
      {"calibration", rec.calibration},
      {"policies", rec.policies},
      {"initial_partition", rec.initial_partition},
      {"initial_world", rec.start_world},
      {"steps", rec.steps},
      {"metrics", rec.metrics},
  };
}

inline RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord rec;
  try {
    rec.config = config_from_json(j.at("config"));
    rec.output_basis = output_basis_from_name(j.at("output_basis").get<std::string>());
    j.at("calibration").get_to(rec.calibration);
    j.at("policies").get_to(rec.policies);
    j.at("initial_partition").get_to(rec.initial_partition);
    j.at("initial_world").get_to(rec.start_world);
    j.at("steps").get_to(rec.steps);
    j.at("metrics").get_to(rec.metrics);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed transcript: ") + e.what());
  }
  return rec;
}

inline void save_transcript(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write transcript: " + path);
  out << run_record_to_json(rec).dump(1, '\t') << "\n";
}

inline RunRecord load_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open transcript: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("transcript " + path + " is not valid JSON: " + e.what());
  }
  return run_record_from_json(j);
}

namespace detail {

inline void replay_check(bool cond, int step, const std::string& what) {
  check(cond, "replay mismatch at step " + std::to_string(step) + ": " + what);
}

inline bool same_region_state(const RegionState& a, const RegionState& b) {
  return a.capital == b.capital && a.productivity == b.productivity &&
         a.population == b.population && a.intensity == b.intensity &&
         a.mitigation_rate == b.mitigation_rate && a.savings_rate == b.savings_rate &&
         a.last_gross_output == b.last_gross_output && a.last_net_output == b.last_net_output &&
         a.last_emissions == b.last_emissions;
}

inline bool same_world(const World& a, const World& b) {
  if (a.regions.size() != b.regions.size()) return false;
  for (size_t i = 0; i < a.regions.size(); ++i)
    if (!same_region_state(a.regions[i], b.regions[i])) return false;
  return a.climate.carbon_stock == b.climate.carbon_stock &&
         a.climate.temperature == b.climate.temperature;
}

}  // namespace detail

// Re-derive every vote outcome, commitment, world step and group update from
// the recorded proposals, decisions and actions; any drift from the recorded
// values is an invariant violation. Returns the recomputed metrics.
inline EpisodeMetrics replay_transcript(const RunRecord& rec) {
  const ScenarioConfig& cfg = rec.config;
  cfg.validate();
  validate_calibration(rec.calibration);
  const NegotiationMode mode = scenario_mode(cfg.scenario);
  const SimParams params = sim_params_for(cfg, rec.calibration);
  check(static_cast<int>(rec.steps.size()) == cfg.horizon,
        "transcript step count does not match its config horizon");

  World world = initial_world(params);
  check(detail::same_world(world, rec.start_world),
        "transcript initial world does not follow from its calibration");

  Partition partition = rec.initial_partition;
  partition.validate();
  InconsistencyLedger ledger;
  ledger.threshold = cfg.inconsistency_threshold;

  std::vector<ClimateState> climate_trajectory{world.climate};
  std::vector<std::vector<double>> outputs;

  for (int step = 0; step < cfg.horizon; ++step) {
    const StepRecord& sr = rec.steps[step];
    const RoundResult& round = sr.round;

    if (mode == NegotiationMode::None) {
      for (int r = 0; r < kNumRegions; ++r)
        detail::replay_check(round.commitments[r].min_mitigation == 0 &&
                                 round.commitments[r].min_savings == 0,
                             step, "non-zero commitment without negotiation");
    } else if (mode == NegotiationMode::Bilateral) {
      auto commitments = bilateral_round(round.bilateral_proposals, round.bilateral_decisions);
      for (int r = 0; r < kNumRegions; ++r)
        detail::replay_check(
            commitments[r].min_mitigation == round.commitments[r].min_mitigation &&
                commitments[r].min_savings == round.commitments[r].min_savings,
            step, "bilateral commitments do not follow from the recorded decisions");
    } else {
      detail::replay_check(round.votes.size() ==
                               static_cast<size_t>(kNumGroups) * (kNumGroups - 1),
                           step, "vote record count");
      for (const auto& vote : round.votes) {
        vote.proposal.validate();
        const auto& members = partition.groups[vote.proposal.to_group];
        for (int i = 0; i < 3; ++i)
          detail::replay_check(vote.voters[i] == members[i], step,
                               "vote voters do not match the partition");
        detail::replay_check(vote.accepted == group_vote(vote.decisions), step,
                             "vote outcome does not follow from the recorded decisions");
      }
      for (int g = 0; g < kNumGroups; ++g) {
        std::vector<GroupLevels> incoming, outgoing;
        for (const auto& vote : round.votes) {
          if (!vote.accepted) continue;
          GroupLevels lv{vote.proposal.mitigation_level, vote.proposal.savings_level};
          if (vote.proposal.to_group == g) incoming.push_back(lv);
          if (vote.proposal.from_group == g) outgoing.push_back(lv);
        }
        GroupLevels level = set_group_commitments(incoming, outgoing);
        detail::replay_check(level.mitigation == round.group_levels[g].mitigation &&
                                 level.savings == round.group_levels[g].savings,
                             step, "group levels do not follow from the recorded votes");
        std::array<double, 3> asked;
        for (int i = 0; i < 3; ++i)
          asked[i] = static_cast<double>(round.share_proposals[g][i]);
        ShareVector shares =
            intra_group_share_split(asked, static_cast<double>(level.mitigation));
        for (int i = 0; i < 3; ++i)
          detail::replay_check(shares.shares[i] == round.shares[g].shares[i], step,
                               "share split does not follow from the recorded proposals");
        auto commitments = apply_commitments(level, round.shares[g], partition.groups[g]);
        for (const auto& c : commitments)
          detail::replay_check(
              c.min_mitigation == round.commitments[c.region].min_mitigation &&
                  c.min_savings == round.commitments[c.region].min_savings,
              step, "member commitments do not follow from the recorded shares");
      }
    }

    detail::replay_check(sr.actions.size() == static_cast<size_t>(kNumRegions), step,
                         "action count");
    for (int r = 0; r < kNumRegions; ++r)
      detail::replay_check(sr.actions[r].mitigation >= round.commitments[r].min_mitigation &&
                               sr.actions[r].savings >= round.commitments[r].min_savings,
                           step, "recorded action violates its commitment");

    world = step_world(world, sr.actions, params);
    detail::replay_check(detail::same_world(world, sr.world), step,
                         "world state does not follow from the recorded actions");
    climate_trajectory.push_back(world.climate);
    outputs.emplace_back();
    for (const auto& rs : world.regions)
      outputs.back().push_back(rec.output_basis == OutputBasis::Net ? rs.last_net_output
                                                                    : rs.last_gross_output);

    if (mode == NegotiationMode::DynamicGroup) {
      ledger = record_inconsistencies(ledger, decision_records(round.votes));
      auto upd = update_groups(partition, ledger, indicators_for(world),
                               similarity_config_for(world, cfg.similarity_threshold));
      partition = upd.partition;
      ledger = upd.ledger;
      detail::replay_check(upd.swaps.size() == sr.swaps.size(), step, "swap count");
      for (size_t i = 0; i < upd.swaps.size(); ++i)
        detail::replay_check(upd.swaps[i].region_a == sr.swaps[i].region_a &&
                                 upd.swaps[i].region_b == sr.swaps[i].region_b,
                             step, "swap events do not follow from the recorded votes");
    }
    detail::replay_check(partition.groups == sr.partition.groups &&
                             partition.generation == sr.partition.generation,
                         step, "partition does not follow from the recorded votes");
    detail::replay_check(ledger.counts == sr.ledger.counts && ledger.pool == sr.ledger.pool,
                         step, "inconsistency ledger does not follow from the recorded votes");
  }

  EpisodeMetrics m = compute_metrics(climate_trajectory, outputs, cfg.anchors);
  check(m.temp_rise == rec.metrics.temp_rise && m.gross_output == rec.metrics.gross_output &&
            m.climate_index == rec.metrics.climate_index &&
            m.econ_index == rec.metrics.econ_index &&
            m.hv_contribution == rec.metrics.hv_contribution,
        "replayed metrics do not match the recorded metrics");
  return m;
}

}  // namespace climneg
