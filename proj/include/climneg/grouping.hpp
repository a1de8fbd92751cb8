#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "climneg/common.hpp"
#include "climneg/engine.hpp"

namespace climneg {

// Built-in seed assignment of the 27 regions into 9 groups of 3.
inline constexpr std::array<std::array<int, 3>, kNumGroups> kSeedGroups = {{
    {26, 1, 2},
    {3, 4, 6},
    {5, 7, 18},
    {19, 10, 12},
    {20, 13, 15},
    {14, 16, 22},
    {8, 9, 21},
    {11, 17, 23},
    {24, 25, 0},
}};

struct Partition {
  std::array<std::array<int, 3>, kNumGroups> groups{};
  int generation = 0;  // number of applied swaps

  void validate() const {
    std::array<int, kNumRegions> seen{};
    for (const auto& g : groups)
      for (int r : g) {
        check(r >= 0 && r < kNumRegions, "partition region id out of range");
        seen[r] += 1;
      }
    for (int r = 0; r < kNumRegions; ++r)
      check(seen[r] == 1, "partition must cover each region exactly once");
  }

  int group_of(int region) const {
    for (int g = 0; g < kNumGroups; ++g)
      for (int r : groups[g])
        if (r == region) return g;
    throw InvariantError("region not in any group: " + std::to_string(region));
  }
};

inline Partition seed_partition() {
  Partition p;
  p.groups = kSeedGroups;
  p.validate();
  return p;
}

struct InconsistencyLedger {
  std::array<int, kNumRegions> counts{};
  int threshold = 18;
  std::set<int> pool;  // regions awaiting exchange, kept until swapped
};

struct SimilarityConfig {
  double pop_scale = 1.0;
  double cap_scale = 1.0;
  double threshold = 0.1;

  void validate() const {
    if (!(pop_scale > 0) || !(cap_scale > 0) || !(threshold > 0))
      throw ConfigError("similarity scales and threshold must be positive");
  }
};

// Current per-region indicators the similarity metric compares.
struct RegionIndicators {
  double population = 0;
  double capital = 0;
};

inline double similarity_distance(const RegionIndicators& a, const RegionIndicators& b,
                                  const SimilarityConfig& cfg) {
  cfg.validate();
  return std::abs(a.population - b.population) / cfg.pop_scale +
         std::abs(a.capital - b.capital) / cfg.cap_scale;
}

enum class FormationMode { SeedTable, Principled };

// Principled formation deals capital-rich regions first (one per group), then
// populous regions (to the capital-poorest group), then balances the rest by
// assigning the most populous remainder to the population-poorest group.
inline Partition form_initial_groups(const std::vector<RegionParams>& params,
                                     FormationMode mode) {
  if (params.size() != static_cast<size_t>(kNumRegions))
    throw ConfigError("group formation needs exactly 27 regions, got " +
                      std::to_string(params.size()));
  {
    std::array<bool, kNumRegions> seen{};
    for (const auto& p : params) {
      if (p.id < 0 || p.id >= kNumRegions || seen[p.id])
        throw ConfigError("group formation needs region ids 0..26 without duplicates");
      seen[p.id] = true;
    }
  }
  if (mode == FormationMode::SeedTable) return seed_partition();

  std::vector<const RegionParams*> by_capital;
  by_capital.reserve(params.size());
  for (const auto& p : params) by_capital.push_back(&p);
  std::sort(by_capital.begin(), by_capital.end(), [](const auto* a, const auto* b) {
    if (a->K0 != b->K0) return a->K0 > b->K0;
    return a->id < b->id;
  });

  Partition part;
  std::array<double, kNumGroups> group_capital{};
  std::array<double, kNumGroups> group_population{};
  for (int g = 0; g < kNumGroups; ++g) {
    part.groups[g][0] = by_capital[g]->id;
    group_capital[g] = by_capital[g]->K0;
    group_population[g] = by_capital[g]->L0;
  }

  std::vector<const RegionParams*> rest(by_capital.begin() + kNumGroups, by_capital.end());
  std::sort(rest.begin(), rest.end(), [](const auto* a, const auto* b) {
    if (a->L0 != b->L0) return a->L0 > b->L0;
    return a->id < b->id;
  });

  std::array<bool, kNumGroups> has_second{};
  for (int i = 0; i < kNumGroups; ++i) {
    int best = -1;
    for (int g = 0; g < kNumGroups; ++g) {
      if (has_second[g]) continue;
      if (best < 0 || group_capital[g] < group_capital[best]) best = g;
    }
    part.groups[best][1] = rest[i]->id;
    has_second[best] = true;
    group_capital[best] += rest[i]->K0;
    group_population[best] += rest[i]->L0;
  }

  std::array<bool, kNumGroups> has_third{};
  for (size_t i = kNumGroups; i < rest.size(); ++i) {
    int best = -1;
    for (int g = 0; g < kNumGroups; ++g) {
      if (has_third[g]) continue;
      if (best < 0 || group_population[g] < group_population[best]) best = g;
    }
    part.groups[best][2] = rest[i]->id;
    has_third[best] = true;
    group_capital[best] += rest[i]->K0;
    group_population[best] += rest[i]->L0;
  }

  part.validate();
  return part;
}

// One region's decision on one proposal its group evaluated, paired with the
// group's voted outcome for that proposal.
struct DecisionRecord {
  int region = -1;
  bool decision = false;
  bool group_outcome = false;
};

inline InconsistencyLedger record_inconsistencies(InconsistencyLedger ledger,
                                                  const std::vector<DecisionRecord>& records) {
  for (const auto& rec : records) {
    check(rec.region >= 0 && rec.region < kNumRegions,
          "inconsistency record region id out of range");
    if (rec.decision != rec.group_outcome) ledger.counts[rec.region] += 1;
  }
  return ledger;
}

struct SwapEvent {
  int region_a = -1;
  int region_b = -1;
  int group_a = -1;  // a's former group, b's new one
  int group_b = -1;
};

struct GroupUpdate {
  Partition partition;
  InconsistencyLedger ledger;
  std::vector<SwapEvent> swaps;
};

// Updating stage: pool regions past the threshold, then repeatedly swap the
// lowest-id pool pair that sits in different groups within similarity reach.
// Swapped regions leave the pool with their counts reset; the rest stay
// pooled and keep accumulating.
inline GroupUpdate update_groups(Partition partition, InconsistencyLedger ledger,
                                 const std::array<RegionIndicators, kNumRegions>& indicators,
                                 const SimilarityConfig& cfg) {
  partition.validate();
  cfg.validate();
  for (int r = 0; r < kNumRegions; ++r) {
    check(ledger.counts[r] >= 0, "inconsistency counts must be non-negative");
    if (ledger.counts[r] > ledger.threshold) ledger.pool.insert(r);
  }

  GroupUpdate out;
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (auto a = ledger.pool.begin(); a != ledger.pool.end() && !swapped; ++a) {
      for (auto b = std::next(a); b != ledger.pool.end() && !swapped; ++b) {
        int ga = partition.group_of(*a);
        int gb = partition.group_of(*b);
        if (ga == gb) continue;
        if (similarity_distance(indicators[*a], indicators[*b], cfg) > cfg.threshold) continue;
        for (int& r : partition.groups[ga])
          if (r == *a) r = *b;
        for (int& r : partition.groups[gb])
          if (r == *b) r = *a;
        partition.generation += 1;
        ledger.counts[*a] = 0;
        ledger.counts[*b] = 0;
        out.swaps.push_back({*a, *b, ga, gb});
        ledger.pool.erase(*b);
        ledger.pool.erase(a);
        swapped = true;
      }
    }
  }

  partition.validate();
  out.partition = partition;
  out.ledger = std::move(ledger);
  return out;
}

// Partition text format: 9 lines of 3 region ids.
inline void save_partition(const Partition& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write partition file: " + path);
  for (const auto& g : p.groups) out << g[0] << ' ' << g[1] << ' ' << g[2] << "\n";
}

inline Partition load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open partition file: " + path);
  Partition p;
  std::string line;
  int g = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (g >= kNumGroups) throw ConfigError("partition file has more than 9 groups: " + path);
    std::istringstream row(line);
    for (int i = 0; i < 3; ++i)
      if (!(row >> p.groups[g][i]))
        throw ConfigError("partition line needs 3 region ids: '" + line + "'");
    int extra;
    if (row >> extra) throw ConfigError("partition line needs 3 region ids: '" + line + "'");
    ++g;
  }
  if (g != kNumGroups) throw ConfigError("partition file needs 9 groups, got " + std::to_string(g));
  try {
    p.validate();
  } catch (const InvariantError& e) {
    throw ConfigError(std::string("invalid partition file: ") + e.what());
  }
  return p;
}

}  // namespace climneg
