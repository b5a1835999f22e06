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

#include "hldpos/chain.hpp"
#include "hldpos/types.hpp"

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace hldpos {

enum class Behavior { honest, hide_own_tx_fork, wrong_tx, timeout, tamper, collude_silent };

const char *to_string(Behavior b);
/// Throws InputError for an unknown name.
Behavior parse_behavior(std::string_view name);

struct AdversarySpec {
    std::map<NodeId, Behavior> behaviors;
    /// Inclusive activation range.
    RoundId first_round = 0;
    RoundId last_round = std::numeric_limits<RoundId>::max();
    /// Members never report one another.
    std::set<NodeId> collusion;

    bool malicious(NodeId node) const { return behaviors.contains(node); }
    /// Throws ParameterError unless collusion ⊆ malicious nodes and
    /// first_round <= last_round.
    void validate() const;
};

/// Configured behavior while `round` is inside the activation range,
/// honest otherwise.
Behavior plan_behavior(const AdversarySpec &spec, NodeId node, RoundId round);

/// True when `inspector` withholds a report against `offender`: always for
/// collude_silent, otherwise only when both are in the collusion set.
/// Nothing is withheld outside the activation range.
bool stays_silent(const AdversarySpec &spec, NodeId inspector, NodeId offender, RoundId round);

/// Long-range fork that erases `target_tx`. Keeps local's blocks below the
/// height h1 holding the target, re-seals every block from h1 up without
/// it (attacker as producer) and adds `extension` empty blocks on top.
/// Throws InputError if the target is absent from local or was not sent by
/// the attacker, or if extension is 0.
Chain build_fork(NodeId attacker, const Chain &local, const Digest &target_tx, unsigned extension = 1);

/// Latest transaction on `chain` sent by `node`.
std::optional<Digest> latest_tx_from(const Chain &chain, NodeId node);

} // namespace hldpos
