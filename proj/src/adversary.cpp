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
#include "hldpos/adversary.hpp"

#include "hldpos/error.hpp"

#include <array>
#include <utility>

namespace hldpos {

namespace {

constexpr std::array<std::pair<Behavior, const char *>, 6> behavior_names{{
    {Behavior::honest, "honest"},
    {Behavior::hide_own_tx_fork, "hide_own_tx_fork"},
    {Behavior::wrong_tx, "wrong_tx"},
    {Behavior::timeout, "timeout"},
    {Behavior::tamper, "tamper"},
    {Behavior::collude_silent, "collude_silent"},
}};

} // namespace

const char *to_string(Behavior b)
{
    for (const auto &[kind, name] : behavior_names)
        if (kind == b) return name;
    return "unknown";
}

Behavior parse_behavior(std::string_view name)
{
    for (const auto &[kind, text] : behavior_names)
        if (name == text) return kind;
    throw InputError("unknown behavior '" + std::string(name) + "'");
}

void AdversarySpec::validate() const
{
    if (first_round > last_round)
        throw ParameterError("adversary activation range is empty");
    for (NodeId n : collusion)
        if (!malicious(n))
            throw ParameterError("collusion member " + std::to_string(n) + " has no malicious behavior");
}

Behavior plan_behavior(const AdversarySpec &spec, NodeId node, RoundId round)
{
    auto it = spec.behaviors.find(node);
    if (it == spec.behaviors.end() || round < spec.first_round || round > spec.last_round)
        return Behavior::honest;
    return it->second;
}

bool stays_silent(const AdversarySpec &spec, NodeId inspector, NodeId offender, RoundId round)
{
    // a colluder whose own behavior is honest still covers for the coalition
    if (!spec.malicious(inspector) || round < spec.first_round || round > spec.last_round) return false;
    if (spec.behaviors.at(inspector) == Behavior::collude_silent) return true;
    return spec.collusion.contains(inspector) && spec.collusion.contains(offender);
}

Chain build_fork(NodeId attacker, const Chain &local, const Digest &target_tx, unsigned extension)
{
    if (extension == 0)
        throw InputError("fork extension must be at least one block");
    auto h1 = local.find_tx(target_tx);
    if (!h1)
        throw InputError("target transaction " + to_hex(target_tx) + " is not on the local chain");
    for (const auto &tx : local.at(*h1).txs)
        if (tx.id == target_tx && tx.sender != attacker)
            throw InputError("target transaction was not created by node " + std::to_string(attacker));

    Chain fork = local.prefix(*h1);
    fork.owner = attacker;
    for (std::uint64_t h = *h1; h <= local.tip_height(); ++h) {
        std::vector<Transaction> kept;
        for (const auto &tx : local.at(h).txs)
            if (tx.id != target_tx) kept.push_back(tx);
        fork.append(Block::seal(h, fork.tip_hash(), attacker, std::move(kept)));
    }
    for (unsigned i = 0; i < extension; ++i)
        fork.append(Block::seal(fork.tip_height() + 1, fork.tip_hash(), attacker, {}));
    return fork;
}

std::optional<Digest> latest_tx_from(const Chain &chain, NodeId node)
{
    const auto &blocks = chain.blocks();
    for (auto b = blocks.rbegin(); b != blocks.rend(); ++b)
        for (auto tx = (*b)->txs.rbegin(); tx != (*b)->txs.rend(); ++tx)
            if (tx->sender == node) return tx->id;
    return std::nullopt;
}

} // namespace hldpos
