#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "climneg/common.hpp"

namespace climneg {

inline double level_to_rate(double level) {
  check(level >= 0.0 && level <= kMaxLevel, "level must lie in [0,10]");
  return level / 10.0;
}

inline void check_level(int level, const char* what) {
  check(level >= 0 && level <= kMaxLevel, std::string(what) + " level must lie in 0..10");
}

// Requirements one group puts to another: the requested group-average
// mitigation and savings levels, accepted or rejected as a pair.
struct Proposal {
  int from_group = -1;
  int to_group = -1;
  int mitigation_level = 0;
  int savings_level = 0;

  void validate() const {
    check(from_group >= 0 && from_group < kNumGroups, "proposal from_group out of range");
    check(to_group >= 0 && to_group < kNumGroups, "proposal to_group out of range");
    check(from_group != to_group, "proposal cannot target its own group");
    check_level(mitigation_level, "proposal mitigation");
    check_level(savings_level, "proposal savings");
  }
};

struct GroupLevels {
  int mitigation = 0;
  int savings = 0;

  void validate() const {
    check_level(mitigation, "group mitigation");
    check_level(savings, "group savings");
  }
};

// Floor rates a region carries into the action step.
struct Commitment {
  int region = -1;
  double min_mitigation = 0.0;
  double min_savings = 0.0;
};

struct ShareVector {
  int group = -1;
  std::array<double, 3> shares{};

  double mean() const { return (shares[0] + shares[1] + shares[2]) / 3.0; }
};

inline int median_level(int a, int b, int c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

// Members propose their own shares of the group-average mitigation level; the
// split shifts all three by a common constant to hit the committed mean, then
// clips at the bounds and spreads any clipped remainder over the others.
inline ShareVector intra_group_share_split(const std::array<double, 3>& proposed,
                                           double commitment_level) {
  for (double p : proposed) check(p >= 0.0 && p <= kMaxLevel, "proposed share must lie in [0,10]");
  check(commitment_level >= 0.0 && commitment_level <= kMaxLevel,
        "commitment level must lie in [0,10]");

  std::array<double, 3> s = proposed;
  std::array<bool, 3> clipped{};
  double target_sum = 3.0 * commitment_level;
  for (int pass = 0; pass < 4; ++pass) {
    double deficit = target_sum - (s[0] + s[1] + s[2]);
    if (std::abs(deficit) <= 1e-12) break;
    int free_count = 0;
    for (bool c : clipped)
      if (!c) ++free_count;
    check(free_count > 0, "share split ran out of adjustable members");
    double shift = deficit / free_count;
    for (int i = 0; i < 3; ++i) {
      if (clipped[i]) continue;
      s[i] += shift;
      if (s[i] >= kMaxLevel) {
        s[i] = kMaxLevel;
        clipped[i] = true;
      } else if (s[i] <= 0.0) {
        s[i] = 0.0;
        clipped[i] = true;
      }
    }
  }

  ShareVector out;
  out.shares = s;
  check(std::abs(out.mean() - commitment_level) <= 1e-9, "share split missed the committed mean");
  return out;
}

inline bool group_vote(const std::vector<bool>& decisions) {
  check(decisions.size() == 3, "group vote needs exactly 3 decisions");
  int accepts = 0;
  for (bool d : decisions)
    if (d) ++accepts;
  return accepts >= 2;
}

inline bool group_vote(const std::array<bool, 3>& decisions) {
  return group_vote(std::vector<bool>(decisions.begin(), decisions.end()));
}

// A group's floor levels: the elementwise max over every accepted proposal it
// is party to, whether it received the requirements or made them.
inline GroupLevels set_group_commitments(const std::vector<GroupLevels>& accepted_incoming,
                                         const std::vector<GroupLevels>& accepted_outgoing) {
  GroupLevels out;
  for (const auto& lv : accepted_incoming) {
    lv.validate();
    out.mitigation = std::max(out.mitigation, lv.mitigation);
    out.savings = std::max(out.savings, lv.savings);
  }
  for (const auto& lv : accepted_outgoing) {
    lv.validate();
    out.mitigation = std::max(out.mitigation, lv.mitigation);
    out.savings = std::max(out.savings, lv.savings);
  }
  return out;
}

inline std::array<Commitment, 3> apply_commitments(const GroupLevels& levels,
                                                   const ShareVector& shares,
                                                   const std::array<int, 3>& members) {
  levels.validate();
  check(std::abs(shares.mean() - static_cast<double>(levels.mitigation)) <= 1e-9,
        "share vector does not match the group mitigation level");
  std::array<Commitment, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].region = members[i];
    out[i].min_mitigation = level_to_rate(shares.shares[i]);
    out[i].min_savings = level_to_rate(static_cast<double>(levels.savings));
  }
  return out;
}

// Pairwise baseline: a directed proposal names the level the proposer would
// take on itself and the level it requests of the recipient.
struct BilateralProposal {
  int from = -1;
  int to = -1;
  int self_level = 0;
  int other_level = 0;

  void validate() const {
    check(from >= 0 && from < kNumRegions, "bilateral proposal from out of range");
    check(to >= 0 && to < kNumRegions, "bilateral proposal to out of range");
    check(from != to, "bilateral proposal cannot target its own region");
    check_level(self_level, "bilateral self");
    check_level(other_level, "bilateral other");
  }
};

// decisions[i] is the recipient's call on proposals[i]. Acceptance binds both
// sides: the recipient to the requested level, the proposer to its own offer.
// The baseline negotiates mitigation only, so savings floors stay 0.
inline std::array<Commitment, kNumRegions> bilateral_round(
    const std::vector<BilateralProposal>& proposals, const std::vector<bool>& decisions) {
  check(proposals.size() == static_cast<size_t>(kNumRegions) * (kNumRegions - 1),
        "bilateral round needs one proposal per ordered region pair");
  check(decisions.size() == proposals.size(), "bilateral round needs one decision per proposal");
  std::array<std::array<bool, kNumRegions>, kNumRegions> seen{};
  std::array<Commitment, kNumRegions> out;
  for (int r = 0; r < kNumRegions; ++r) out[r].region = r;
  for (size_t i = 0; i < proposals.size(); ++i) {
    const auto& p = proposals[i];
    p.validate();
    check(!seen[p.from][p.to], "duplicate bilateral proposal for an ordered pair");
    seen[p.from][p.to] = true;
    if (!decisions[i]) continue;
    out[p.to].min_mitigation =
        std::max(out[p.to].min_mitigation, level_to_rate(static_cast<double>(p.other_level)));
    out[p.from].min_mitigation =
        std::max(out[p.from].min_mitigation, level_to_rate(static_cast<double>(p.self_level)));
  }
  return out;
}

}  // namespace climneg
