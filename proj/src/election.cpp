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
#include "hldpos/election.hpp"

#include "hldpos/error.hpp"
#include "hldpos/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace hldpos {

const char *to_string(Provenance p) { return p == Provenance::voted ? "voted" : "random"; }

namespace {

std::string describe(const Ballot &b)
{
    return "ballot{voter=" + std::to_string(b.voter) + ", candidate=" + std::to_string(b.candidate) +
           ", round=" + std::to_string(b.round) + "}";
}

} // namespace

VoteTally tally_votes(std::span<const Ballot> ballots, std::span<const NodeId> members, unsigned group)
{
    std::unordered_map<NodeId, std::uint32_t> votes;
    votes.reserve(members.size());
    for (NodeId m : members)
        votes.emplace(m, 0);

    for (const auto &b : ballots) {
        if (!votes.contains(b.voter) || !votes.contains(b.candidate))
            throw ValidationError("cross-group " + describe(b) + " in group " + std::to_string(group));
        if (b.voter == b.candidate)
            throw ValidationError("self-vote " + describe(b));
        ++votes[b.candidate];
    }

    VoteTally tally;
    tally.group = group;
    tally.group_size = members.size();
    tally.ballots = ballots.size();
    tally.ranking.assign(votes.begin(), votes.end());
    std::sort(tally.ranking.begin(), tally.ranking.end(), [](const auto &l, const auto &r) {
        if (l.second != r.second) return l.second > r.second;
        return l.first < r.first;
    });
    return tally;
}

void Window::validate() const
{
    if (!(lo >= 0.0 && lo < hi && hi <= 0.5))
        throw ValidationError("vote window must satisfy 0 <= lo < hi <= 0.5");
}

CooldownLedger::CooldownLedger(double rho, std::optional<unsigned> fixed_psi) : rho_(rho), fixed_psi_(fixed_psi)
{
    if (rho < 0.0)
        throw ValidationError("cooldown fraction rho must be non-negative");
}

unsigned CooldownLedger::psi_for(std::size_t group_size) const
{
    if (fixed_psi_) return *fixed_psi_;
    // guard against 500 * 0.2 landing a hair above 100
    return static_cast<unsigned>(std::ceil(static_cast<double>(group_size) * rho_ - 1e-9));
}

bool CooldownLedger::blocked(NodeId node, RoundId round, unsigned psi) const
{
    auto it = last_.find(node);
    if (it == last_.end() || it->second > round) return false;
    return round - it->second <= psi;
}

std::optional<RoundId> CooldownLedger::last_served(NodeId node) const
{
    auto it = last_.find(node);
    if (it == last_.end()) return std::nullopt;
    return it->second;
}

NodeId select_voted_rep(const VoteTally &tally, unsigned group_index, const Window &window, CooldownLedger &ledger,
                        RoundId round, unsigned psi, const std::set<NodeId> &excluded)
{
    if (tally.ranking.empty())
        throw ElectionError("group " + std::to_string(tally.group) + ": empty tally");
    auto usable = [&](NodeId id) { return !excluded.contains(id) && !ledger.blocked(id, round, psi); };

    const double n = static_cast<double>(tally.group_size);
    std::size_t lo = std::min(static_cast<std::size_t>(std::floor(n * window.lo)), tally.ranking.size());
    std::size_t hi = std::min(static_cast<std::size_t>(std::floor(n * window.hi)), tally.ranking.size());

    std::vector<NodeId> candidates;
    for (std::size_t r = lo; r < hi; ++r)
        if (usable(tally.ranking[r].first)) candidates.push_back(tally.ranking[r].first);
    if (candidates.empty()) {
        for (const auto &[id, count] : tally.ranking)
            if (usable(id)) candidates.push_back(id);
    }
    if (candidates.empty())
        throw ElectionError("group " + std::to_string(tally.group) + ": no eligible voted representative");

    NodeId pick = candidates[group_index % candidates.size()];
    ledger.record(pick, round);
    return pick;
}

std::size_t random_rep_index(double u, std::size_t n) { return static_cast<std::size_t>(u * static_cast<double>(n)); }

NodeId select_random_rep(std::span<const NodeId> members, const std::set<NodeId> &excluded, CooldownLedger &ledger,
                         RoundId round, unsigned psi, ByteView round_seed, unsigned group_index, unsigned draw)
{
    std::vector<NodeId> queue;
    std::vector<NodeId> cooling;
    for (NodeId id : members) {
        if (excluded.contains(id)) continue;
        if (ledger.blocked(id, round, psi))
            cooling.push_back(id);
        else
            queue.push_back(id);
    }
    if (queue.empty()) {
        if (cooling.empty())
            throw ElectionError("group " + std::to_string(group_index) + ": no candidate for the random seat");
        // lift the oldest cooldown; one member is enough to make the queue nonempty
        auto oldest = std::min_element(cooling.begin(), cooling.end(), [&](NodeId l, NodeId r) {
            auto lr = *ledger.last_served(l);
            auto rr = *ledger.last_served(r);
            return lr != rr ? lr < rr : l < r;
        });
        queue.push_back(*oldest);
    }
    std::sort(queue.begin(), queue.end());

    HashInput seed;
    seed.add(round_seed).add_u32(group_index);
    if (draw > 0) seed.add_u32(draw);
    SeededRng rng(seed.digest());
    NodeId pick = queue[random_rep_index(rng.unit(), queue.size())];
    ledger.record(pick, round);
    return pick;
}

nlohmann::json witness_list_to_json(const WitnessList &list)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto &e : list.entries)
        entries.push_back({{"node", e.node}, {"group", e.group}, {"provenance", to_string(e.provenance)}});
    return {{"round", list.round}, {"entries", std::move(entries)}};
}

WitnessList build_witness_list(std::span<const GroupPicks> picks, RoundId round)
{
    WitnessList list;
    list.round = round;
    std::size_t pairs = 0;
    for (const auto &g : picks) {
        if (g.voted.size() != g.random.size())
            throw std::logic_error("build_witness_list: unequal seat counts in group " + std::to_string(g.group));
        pairs = std::max(pairs, g.voted.size());
    }
    std::unordered_set<NodeId> seen;
    auto push = [&](NodeId node, unsigned group, Provenance prov) {
        if (!seen.insert(node).second)
            throw std::logic_error("build_witness_list: node " + std::to_string(node) + " listed twice");
        list.entries.push_back(WitnessEntry{node, group, prov});
    };
    for (std::size_t t = 0; t < pairs; ++t) {
        for (const auto &g : picks) {
            if (t >= g.voted.size()) continue;
            push(g.voted[t], g.group, Provenance::voted);
            push(g.random[t], g.group, Provenance::random);
        }
    }
    return list;
}

std::vector<Ballot> stake_following_ballots(const GroupAssignment &assignment, const StakeLookup &stake,
                                            const NodePredicate &eligible, const NodePredicate &votes, RoundId round)
{
    std::vector<Ballot> ballots;
    for (const auto &members : assignment.members) {
        // top two eligible members by (stake desc, id asc)
        std::optional<NodeId> first, second;
        auto better = [&](NodeId l, NodeId r) {
            Tokens sl = stake(l), sr = stake(r);
            return sl != sr ? sl > sr : l < r;
        };
        for (NodeId id : members) {
            if (!eligible(id)) continue;
            if (!first || better(id, *first)) {
                second = first;
                first = id;
            } else if (!second || better(id, *second)) {
                second = id;
            }
        }
        for (NodeId voter : members) {
            if (!votes(voter)) continue;
            std::optional<NodeId> choice = (first && *first != voter) ? first : second;
            if (choice) ballots.push_back(Ballot{voter, *choice, round});
        }
    }
    return ballots;
}

ElectionResult run_election(const GroupAssignment &assignment, std::span<const Ballot> ballots, CooldownLedger &ledger,
                            const ElectionConfig &config, RoundId round, ByteView round_seed,
                            const NodePredicate &eligible)
{
    config.window.validate();
    if (config.pairs_per_group == 0)
        throw ValidationError("pairs_per_group must be positive");

    // bucket ballots by the voter's group
    std::vector<std::vector<Ballot>> by_group(assignment.group_count);
    for (const auto &b : ballots) {
        unsigned g = assignment.group_of(b.voter);
        if (g == 0)
            throw ValidationError("ballot from unassigned voter " + std::to_string(b.voter));
        by_group[g - 1].push_back(b);
    }

    ElectionResult result;
    result.ballots.assign(ballots.begin(), ballots.end());
    std::vector<GroupPicks> picks;
    for (unsigned g = 1; g <= assignment.group_count; ++g) {
        const auto &members = assignment.group(g);
        VoteTally tally = tally_votes(by_group[g - 1], members, g);
        unsigned psi = ledger.psi_for(members.size());

        std::set<NodeId> excluded;
        for (NodeId id : members)
            if (!eligible(id)) excluded.insert(id);

        GroupPicks gp;
        gp.group = g;
        for (unsigned t = 0; t < config.pairs_per_group; ++t) {
            NodeId v = select_voted_rep(tally, g, config.window, ledger, round, psi, excluded);
            excluded.insert(v);
            NodeId s = select_random_rep(members, excluded, ledger, round, psi, round_seed, g, t);
            excluded.insert(s);
            gp.voted.push_back(v);
            gp.random.push_back(s);
        }
        picks.push_back(std::move(gp));
        result.tallies.push_back(std::move(tally));
    }
    result.witnesses = build_witness_list(picks, round);
    return result;
}

} // namespace hldpos
