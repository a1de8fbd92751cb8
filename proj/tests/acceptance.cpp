// Acceptance gate: one pass/fail line per criterion, exit 0 only if all hold.
// argv[1] names the CLI binary used by the determinism criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "climneg/episode.hpp"
#include "climneg/report.hpp"
#include "climneg/round.hpp"
#include "climneg/scenario.hpp"

using namespace climneg;
namespace fs = std::filesystem;

namespace {

int failures = 0;
fs::path work_dir;
std::string cli_path;

void criterion(int number, const std::string& text, double budget_ms,
               const std::function<bool(std::string&)>& body) {
  std::string why;
  bool ok = false;
  auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(why);
  } catch (const std::exception& e) {
    ok = false;
    why = std::string("exception: ") + e.what();
  }
  auto t1 = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (ok && budget_ms > 0 && ms > budget_ms) {
    ok = false;
    why = "over the runtime budget";
  }
  std::printf("%s  %2d  %s  (%.2f ms)\n", ok ? "PASS" : "FAIL", number, text.c_str(), ms);
  if (!ok) {
    if (!why.empty()) std::printf("          %s\n", why.c_str());
    ++failures;
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Independent share-split oracle: bisect the common shift, clipping at the
// bounds, until the clipped mean hits the commitment.
std::array<double, 3> water_fill_shares(const std::array<double, 3>& proposed, double level) {
  auto mean_at = [&](double t) {
    double sum = 0;
    for (double p : proposed) sum += std::clamp(p + t, 0.0, 10.0);
    return sum / 3.0;
  };
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (mean_at(mid) < level ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  return {std::clamp(proposed[0] + t, 0.0, 10.0), std::clamp(proposed[1] + t, 0.0, 10.0),
          std::clamp(proposed[2] + t, 0.0, 10.0)};
}

bool table2_identity(std::string& why) {
  const double rows[5][3] = {{0.44, 0.66, 0.29},
                             {0.88, 0.41, 0.36},
                             {0.54, 0.59, 0.32},
                             {0.62, 0.77, 0.48},
                             {0.56, 0.77, 0.43}};
  for (const auto& row : rows) {
    double hv = hypervolume_contribution(row[0], row[1]);
    if (std::abs(hv - row[2]) > 0.005) {
      why = "contribution " + format_double(hv) + " misses " + format_double(row[2]);
      return false;
    }
  }
  return true;
}

bool seed_table(std::string& why) {
  Partition p = form_initial_groups(synthetic_calibration(0), FormationMode::SeedTable);
  p.validate();
  if (p.groups != kSeedGroups) {
    why = "formation does not return the published seed triples";
    return false;
  }
  return p.generation == 0;
}

bool vote_oracle(std::string& why) {
  for (int mask = 0; mask < 8; ++mask) {
    std::array<bool, 3> d = {(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
    int yes = int(d[0]) + int(d[1]) + int(d[2]);
    if (group_vote(d) != (yes >= 2)) {
      why = "vote mask " + std::to_string(mask) + " disagrees with majority";
      return false;
    }
  }
  return true;
}

bool share_split_oracle(std::string& why) {
  std::mt19937_64 rng(0xACC4);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    std::array<double, 3> proposed = {u(rng), u(rng), u(rng)};
    double level = u(rng);
    ShareVector out = intra_group_share_split(proposed, level);
    auto oracle = water_fill_shares(proposed, level);
    for (int k = 0; k < 3; ++k) {
      if (out.shares[k] < -1e-12 || out.shares[k] > 10.0 + 1e-12) {
        why = "share out of bounds in case " + std::to_string(i);
        return false;
      }
      if (std::abs(out.shares[k] - oracle[k]) > 1e-9) {
        why = "case " + std::to_string(i) + ": share " + format_double(out.shares[k]) +
              " vs oracle " + format_double(oracle[k]);
        return false;
      }
    }
    if (std::abs(out.mean() - level) > 1e-9) {
      why = "case " + std::to_string(i) + " missed the committed mean";
      return false;
    }
  }
  return true;
}

bool commitment_respect(std::string& why) {
  std::mt19937_64 rng(0xC0FFEE);
  std::uniform_int_distribution<int> kind_of(0, 3);
  std::uniform_int_distribution<int> level_of(0, 10);
  std::uniform_real_distribution<double> slope_of(0.0, 1.0);
  fs::path map_path = work_dir / "fuzz_policies.csv";

  for (int episode = 0; episode < 100; ++episode) {
    PolicyMap map;
    for (int r = 0; r < kNumRegions; ++r) {
      map[r].kind = static_cast<PolicyKind>(kind_of(rng));
      map[r].target_level = level_of(rng);
      map[r].capacity_slope = slope_of(rng);
      map[r].seed = rng();
    }
    save_policy_map_csv(map, map_path.string());

    ScenarioConfig cfg;
    cfg.scenario = Scenario::Dynamic;
    cfg.seed = episode;
    cfg.policy_map = map_path.string();
    RunRecord rec = run_episode(cfg);

    Partition before_round = rec.initial_partition;
    for (const auto& sr : rec.steps) {
      for (int r = 0; r < kNumRegions; ++r) {
        const auto& c = sr.round.commitments[r];
        if (sr.actions[r].mitigation < c.min_mitigation ||
            sr.actions[r].savings < c.min_savings) {
          why = "episode " + std::to_string(episode) + " step " + std::to_string(sr.step) +
                " region " + std::to_string(r) + " undercut its floor";
          return false;
        }
      }
      for (int g = 0; g < kNumGroups; ++g) {
        double level = sr.round.group_levels[g].mitigation;
        if (std::abs(sr.round.shares[g].mean() - level) > 1e-9) {
          why = "episode " + std::to_string(episode) + " group " + std::to_string(g) +
                " share mean drifted off its level";
          return false;
        }
        double commit_mean = 0;
        for (int m = 0; m < kGroupSize; ++m)
          commit_mean += sr.round.commitments[before_round.groups[g][m]].min_mitigation;
        commit_mean /= kGroupSize;
        if (std::abs(commit_mean - level / 10.0) > 1e-9) {
          why = "episode " + std::to_string(episode) + " group " + std::to_string(g) +
                " mean committed mitigation misses its level";
          return false;
        }
      }
      before_round = sr.partition;
    }
  }
  return true;
}

bool partition_safety(std::string& why) {
  std::mt19937_64 rng(0x9A57);
  std::uniform_int_distribution<int> bump(0, 6);
  std::uniform_real_distribution<double> pop_of(0.0, 10.0);
  std::uniform_real_distribution<double> cap_of(0.0, 100.0);

  for (int trial = 0; trial < 1000; ++trial) {
    Partition part = seed_partition();
    InconsistencyLedger ledger;
    std::array<RegionIndicators, kNumRegions> ind;
    for (auto& i : ind) i = {pop_of(rng), cap_of(rng)};
    SimilarityConfig cfg{10.0, 100.0, 0.05 + 0.45 * std::generate_canonical<double, 53>(rng)};

    for (int round = 0; round < 5; ++round) {
      for (int r = 0; r < kNumRegions; ++r) ledger.counts[r] += bump(rng);
      GroupUpdate upd = update_groups(part, ledger, ind, cfg);
      try {
        upd.partition.validate();
      } catch (const std::exception& e) {
        why = "trial " + std::to_string(trial) + ": " + e.what();
        return false;
      }
      for (const auto& swap : upd.swaps) {
        if (upd.ledger.counts[swap.region_a] != 0 || upd.ledger.counts[swap.region_b] != 0) {
          why = "trial " + std::to_string(trial) + ": swapped counters not reset";
          return false;
        }
        if (upd.ledger.pool.count(swap.region_a) || upd.ledger.pool.count(swap.region_b)) {
          why = "trial " + std::to_string(trial) + ": swapped regions left in the pool";
          return false;
        }
      }
      part = upd.partition;
      ledger = upd.ledger;
    }
  }
  return true;
}

bool ledger_arithmetic(std::string& why) {
  PolicyMap map;
  for (auto& p : map) p = {PolicyKind::Cooperative, 8, 0, 0};
  map[1] = {PolicyKind::Selfish, 0, 0, 0};
  fs::path map_path = work_dir / "dissent_policies.csv";
  save_policy_map_csv(map, map_path.string());

  ScenarioConfig cfg;
  cfg.scenario = Scenario::Dynamic;
  cfg.seed = 12;
  cfg.policy_map = map_path.string();
  RunRecord rec = run_episode(cfg);

  if (!rec.steps[0].ledger.pool.empty() || !rec.steps[1].ledger.pool.empty()) {
    why = "dissenter pooled before its count could exceed 18";
    return false;
  }
  if (rec.steps[0].ledger.counts[1] != 8 || rec.steps[1].ledger.counts[1] != 16 ||
      rec.steps[2].ledger.counts[1] != 24) {
    why = "dissent counts are not 8 per step";
    return false;
  }
  if (rec.steps[2].ledger.pool != std::set<int>{1}) {
    why = "dissenter missing from the pool after step 3";
    return false;
  }
  return true;
}

bool hypervolume_monte_carlo(std::string& why) {
  std::mt19937_64 rng(0x5E7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count_of(1, 8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> points(count_of(rng));
    for (auto& p : points) p = {u(rng), u(rng)};
    double exact = hypervolume_set(points);

    int hits = 0;
    const int samples = 1000000;
    for (int s = 0; s < samples; ++s) {
      double x = u(rng), y = u(rng);
      for (const auto& p : points)
        if (p.first >= x && p.second >= y) {
          ++hits;
          break;
        }
    }
    double mc = double(hits) / samples;
    if (std::abs(exact - mc) > 0.01) {
      why = "trial " + std::to_string(trial) + ": sweep " + format_double(exact) +
            " vs sampled " + format_double(mc);
      return false;
    }
  }
  return true;
}

bool directional_claims(std::string& why) {
  const Scenario negotiated[] = {Scenario::Bilateral, Scenario::StaticMitigation,
                                 Scenario::StaticMitigationSaving, Scenario::Dynamic};
  int cooler = 0, richer = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ScenarioConfig cfg;
    cfg.seed = seed;

    cfg.scenario = Scenario::None;
    double base_temp = run_episode(cfg).metrics.temp_rise;

    bool all_below = true;
    double out_mit = 0, out_mit_sav = 0;
    for (Scenario s : negotiated) {
      cfg.scenario = s;
      EpisodeMetrics m = run_episode(cfg).metrics;
      all_below = all_below && (base_temp > m.temp_rise);
      if (s == Scenario::StaticMitigation) out_mit = m.gross_output;
      if (s == Scenario::StaticMitigationSaving) out_mit_sav = m.gross_output;
    }
    cooler += all_below ? 1 : 0;
    richer += (out_mit_sav > out_mit) ? 1 : 0;
  }
  if (cooler < 9) {
    why = "negotiation cooled the baseline in only " + std::to_string(cooler) + "/10 seeds";
    return false;
  }
  if (richer < 8) {
    why = "savings negotiation out-earned mitigation-only in only " + std::to_string(richer) +
          "/10 seeds";
    return false;
  }
  return true;
}

bool cli_determinism(std::string& why) {
  if (cli_path.empty()) {
    why = "no CLI binary path given";
    return false;
  }
  fs::path a = work_dir / "cmp_a";
  fs::path b = work_dir / "cmp_b";
  std::string base = "\"" + cli_path + "\" compare --scenarios none,static-mitigation,dynamic" +
                     " --seeds 0..2 --out ";
  for (const fs::path& dir : {a, b}) {
    std::string cmd = base + "\"" + dir.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) {
      why = "compare run failed";
      return false;
    }
  }
  for (const char* name : {"metrics.csv", "comparison.csv", "hypervolume.txt"}) {
    std::string first = slurp(a / name);
    if (first.empty() || first != slurp(b / name)) {
      why = std::string(name) + " differs between identical runs";
      return false;
    }
  }
  return true;
}

bool engine_sanity(std::string& why) {
  ScenarioConfig cfg;
  cfg.scenario = Scenario::None;
  cfg.policy_map = "full-mitigation";
  cfg.seed = 5;
  RunRecord rec = run_episode(cfg);
  double total_emissions = 0;
  for (const auto& sr : rec.steps)
    for (const auto& state : sr.world.regions) total_emissions += state.last_emissions;
  if (total_emissions != 0.0) {
    why = "full mitigation still emitted " + format_double(total_emissions);
    return false;
  }
  if (rec.metrics.temp_rise > rec.start_world.climate.temperature) {
    why = "temperature rose despite zero emissions";
    return false;
  }

  auto params = synthetic_calibration(5);
  params[0].K0 = 0.0;
  fs::path cal_path = work_dir / "zero_capital.csv";
  save_calibration_csv(params, cal_path.string());
  ScenarioConfig poor;
  poor.scenario = Scenario::None;
  poor.policy_map = "uniform-selfish";
  poor.calibration = cal_path.string();
  RunRecord rec2 = run_episode(poor);
  for (const auto& sr : rec2.steps) {
    const auto& state = sr.world.regions[0];
    if (state.last_gross_output != 0.0 || state.capital != 0.0) {
      why = "a region with no capital produced output";
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  work_dir = fs::temp_directory_path() / "climneg_acceptance";
  fs::remove_all(work_dir);
  fs::create_directories(work_dir);

  criterion(1, "published index pairs multiply out to their hypervolume column", 1.0,
            table2_identity);
  criterion(2, "seed-table formation returns the published nine triples", 0, seed_table);
  criterion(3, "group vote matches brute-force majority on all eight ballots", 0, vote_oracle);
  criterion(4, "share split agrees with a water-filling oracle on 10000 cases", 5000.0,
            share_split_oracle);
  criterion(5, "no action undercuts its floor across 100 fuzzed dynamic episodes", 0,
            commitment_respect);
  criterion(6, "group updating preserves the 9x3 cover over 1000 randomized runs", 0,
            partition_safety);
  criterion(7, "an always-dissenting region pools exactly after step 3", 0, ledger_arithmetic);
  criterion(8, "hypervolume sweep matches Monte Carlo on 50 random sets", 60000.0,
            hypervolume_monte_carlo);
  criterion(9, "negotiation cools the baseline and savings talks raise output", 120000.0,
            directional_claims);
  criterion(10, "identical compare invocations emit byte-identical tables", 0, cli_determinism);
  criterion(11, "full mitigation emits nothing; no capital means no output", 0, engine_sanity);

  if (failures == 0) std::printf("all criteria hold\n");
  fs::remove_all(work_dir);
  return failures == 0 ? 0 : 1;
}
