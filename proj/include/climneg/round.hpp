#pragma once

#include <array>
#include <vector>

#include "climneg/agents.hpp"
#include "climneg/common.hpp"
#include "climneg/grouping.hpp"
#include "climneg/negotiation.hpp"

namespace climneg {

enum class NegotiationMode { None, Bilateral, StaticGroup, DynamicGroup };
enum class NegotiationVariant { MitigationOnly, MitigationSavings };

struct VoteRecord {
  Proposal proposal;
  std::array<int, 3> voters = {-1, -1, -1};
  std::array<bool, 3> decisions{};
  bool accepted = false;
};

struct RoundResult {
  std::array<Commitment, kNumRegions> commitments{};
  // Group modes only:
  std::vector<VoteRecord> votes;
  std::array<GroupLevels, kNumGroups> group_levels{};
  std::array<std::array<int, 3>, kNumGroups> share_proposals{};
  std::array<ShareVector, kNumGroups> shares{};
  // Bilateral mode only:
  std::vector<BilateralProposal> bilateral_proposals;
  std::vector<bool> bilateral_decisions;
};

inline std::vector<DecisionRecord> decision_records(const std::vector<VoteRecord>& votes) {
  std::vector<DecisionRecord> out;
  out.reserve(votes.size() * 3);
  for (const auto& v : votes)
    for (int i = 0; i < 3; ++i) out.push_back({v.voters[i], v.decisions[i], v.accepted});
  return out;
}

// One negotiation round: share proposals, inter-group proposals (member
// medians), member decisions, 2-of-3 votes, then commitments. The share split
// runs against the voted group level so member floors average to it.
inline RoundResult run_negotiation_round(NegotiationMode mode, NegotiationVariant variant,
                                         std::array<Policy, kNumRegions>& policies,
                                         const std::array<Observation, kNumRegions>& obs,
                                         const Partition& partition) {
  RoundResult out;
  for (int r = 0; r < kNumRegions; ++r) out.commitments[r].region = r;
  if (mode == NegotiationMode::None) return out;

  if (mode == NegotiationMode::Bilateral) {
    for (int from = 0; from < kNumRegions; ++from)
      for (int to = 0; to < kNumRegions; ++to) {
        if (from == to) continue;
        out.bilateral_proposals.push_back(policies[from].propose_bilateral(obs[from], to));
      }
    out.bilateral_decisions.reserve(out.bilateral_proposals.size());
    for (const auto& p : out.bilateral_proposals)
      out.bilateral_decisions.push_back(policies[p.to].decide_bilateral(obs[p.to], p));
    out.commitments = bilateral_round(out.bilateral_proposals, out.bilateral_decisions);
    return out;
  }

  partition.validate();
  std::array<PolicyProposal, kNumRegions> member_proposals;
  for (int g = 0; g < kNumGroups; ++g)
    for (int i = 0; i < 3; ++i) {
      int r = partition.groups[g][i];
      member_proposals[r] = policies[r].propose(obs[r]);
      out.share_proposals[g][i] = member_proposals[r].share_level;
    }

  // Group proposal: elementwise median of the members' requested levels.
  std::array<std::array<Proposal, kNumGroups>, kNumGroups> proposals{};  // [from][to]
  for (int g = 0; g < kNumGroups; ++g)
    for (int h = 0; h < kNumGroups; ++h) {
      if (g == h) continue;
      std::array<int, 3> mit, sav;
      for (int i = 0; i < 3; ++i) {
        const auto& lv = member_proposals[partition.groups[g][i]].outgoing[h];
        mit[i] = lv.mitigation;
        sav[i] = lv.savings;
      }
      Proposal p;
      p.from_group = g;
      p.to_group = h;
      p.mitigation_level = median_level(mit[0], mit[1], mit[2]);
      p.savings_level = variant == NegotiationVariant::MitigationOnly
                            ? 0
                            : median_level(sav[0], sav[1], sav[2]);
      p.validate();
      proposals[g][h] = p;
    }

  std::array<std::array<bool, kNumGroups>, kNumGroups> accepted{};  // [from][to]
  for (int h = 0; h < kNumGroups; ++h)
    for (int g = 0; g < kNumGroups; ++g) {
      if (g == h) continue;
      VoteRecord vote;
      vote.proposal = proposals[g][h];
      for (int i = 0; i < 3; ++i) {
        int r = partition.groups[h][i];
        vote.voters[i] = r;
        vote.decisions[i] = policies[r].decide(obs[r], vote.proposal);
      }
      vote.accepted = group_vote(vote.decisions);
      accepted[g][h] = vote.accepted;
      out.votes.push_back(vote);
    }

  for (int g = 0; g < kNumGroups; ++g) {
    std::vector<GroupLevels> incoming, outgoing;
    for (int h = 0; h < kNumGroups; ++h) {
      if (g == h) continue;
      if (accepted[h][g])
        incoming.push_back({proposals[h][g].mitigation_level, proposals[h][g].savings_level});
      if (accepted[g][h])
        outgoing.push_back({proposals[g][h].mitigation_level, proposals[g][h].savings_level});
    }
    out.group_levels[g] = set_group_commitments(incoming, outgoing);

    std::array<double, 3> asked;
    for (int i = 0; i < 3; ++i) asked[i] = static_cast<double>(out.share_proposals[g][i]);
    out.shares[g] =
        intra_group_share_split(asked, static_cast<double>(out.group_levels[g].mitigation));
    out.shares[g].group = g;

    auto commitments = apply_commitments(out.group_levels[g], out.shares[g], partition.groups[g]);
    for (const auto& c : commitments) out.commitments[c.region] = c;
  }
  return out;
}

}  // namespace climneg
