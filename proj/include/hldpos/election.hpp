//   Copyright 2026 The hldpos-lab Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
#pragma once

#include "hldpos/grouping.hpp"
#include "hldpos/types.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

namespace hldpos {

enum class Provenance { voted, random };

const char *to_string(Provenance p);

struct Ballot {
    NodeId voter = 0;
    NodeId candidate = 0;
    RoundId round = 0;
};

/// Group vote result, most votes first.
struct VoteTally {
    unsigned group = 0;
    std::vector<std::pair<NodeId, std::uint32_t>> ranking;
    std::size_t group_size = 0;
    std::size_t ballots = 0;
};

/// Counts same-group ballots. Ties go to the lower node id and members with
/// no votes trail the list. Throws ValidationError naming the first ballot
/// whose voter or candidate is outside the group, or that is a self-vote.
VoteTally tally_votes(std::span<const Ballot> ballots, std::span<const NodeId> members, unsigned group);

/// Fractional rank window [lo, hi) of a tally eligible for the voted seat.
struct Window {
    double lo = 0.0;
    double hi = 0.5;
    void validate() const;
};

/// Last round each node served as a representative (either role). A node
/// that served in round r is blocked for rounds r .. r + psi.
class CooldownLedger {
public:
    explicit CooldownLedger(double rho = 0.2, std::optional<unsigned> fixed_psi = std::nullopt);

    /// fixed psi when configured, else ceil(group_size * rho).
    unsigned psi_for(std::size_t group_size) const;
    bool blocked(NodeId node, RoundId round, unsigned psi) const;
    void record(NodeId node, RoundId round) { last_[node] = round; }
    std::optional<RoundId> last_served(NodeId node) const;

    double rho() const noexcept { return rho_; }
    std::optional<unsigned> fixed_psi() const noexcept { return fixed_psi_; }

private:
    double rho_;
    std::optional<unsigned> fixed_psi_;
    std::unordered_map<NodeId, RoundId> last_;
};

/// Voted representative: W = tally ranks [floor(N*lo), floor(N*hi)) minus
/// blocked and `excluded` nodes, pick W[group_index mod |W|]. Falls back to
/// the whole tally when W is empty. Records the pick in the ledger.
NodeId select_voted_rep(const VoteTally &tally, unsigned group_index, const Window &window, CooldownLedger &ledger,
                        RoundId round, unsigned psi, const std::set<NodeId> &excluded = {});

/// Random representative from the id-sorted candidate queue. `draw`
/// distinguishes several random seats in one group; draw 0 seeds the stream
/// with H(round_seed ‖ group_index). Records the pick in the ledger.
NodeId select_random_rep(std::span<const NodeId> members, const std::set<NodeId> &excluded, CooldownLedger &ledger,
                         RoundId round, unsigned psi, ByteView round_seed, unsigned group_index, unsigned draw = 0);

/// floor(u * n)
std::size_t random_rep_index(double u, std::size_t n);

struct WitnessEntry {
    NodeId node = 0;
    unsigned group = 0;
    Provenance provenance = Provenance::voted;
};

struct WitnessList {
    RoundId round = 0;
    std::vector<WitnessEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
    const WitnessEntry &at(std::size_t position) const { return entries.at(position - 1); } // 1-based
};

nlohmann::json witness_list_to_json(const WitnessList &list);

/// One group's representatives; voted[t] and random[t] form seat pair t.
struct GroupPicks {
    unsigned group = 0;
    std::vector<NodeId> voted;
    std::vector<NodeId> random;
};

/// Packaging order: for each seat pair t, for each group in order, the
/// voted then the random representative. With one pair per group this is
/// R_v^1, R_s^1, R_v^2, R_s^2, ...
WitnessList build_witness_list(std::span<const GroupPicks> picks, RoundId round);

struct ElectionConfig {
    Window window;
    unsigned pairs_per_group = 1;
    double rho = 0.2;
    std::optional<unsigned> fixed_psi;
};

struct ElectionResult {
    WitnessList witnesses;
    std::vector<VoteTally> tallies;
    std::vector<Ballot> ballots;
};

using NodePredicate = std::function<bool(NodeId)>;
using StakeLookup = std::function<Tokens(NodeId)>;

/// Each member that `votes(voter)` admits casts one ballot for the
/// highest-stake other member passing `eligible`; ties go to the lower id.
std::vector<Ballot> stake_following_ballots(const GroupAssignment &assignment, const StakeLookup &stake,
                                            const NodePredicate &eligible, const NodePredicate &votes, RoundId round);

/// Full per-round election across all groups. Nodes failing `eligible`
/// (under-staked or banned) are excluded from both seats.
ElectionResult run_election(const GroupAssignment &assignment, std::span<const Ballot> ballots, CooldownLedger &ledger,
                            const ElectionConfig &config, RoundId round, ByteView round_seed,
                            const NodePredicate &eligible);

} // namespace hldpos
