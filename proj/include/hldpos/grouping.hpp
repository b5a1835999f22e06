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

#include "hldpos/crypto/vrf.hpp"
#include "hldpos/types.hpp"

#include <json.hpp>

#include <span>
#include <vector>

namespace hldpos {

struct NodeRecord {
    NodeId id = 0;
    KeyPair keys;
    Tokens balance = 0; ///< spendable tokens (AT)
    Tokens stake = 0;   ///< weight honest voters rank candidates by
    bool honest = true; ///< simulation ground truth only
};

/// One node's VRF evaluation for an epoch, enough for a third party to
/// recompute its raw bucket.
struct GroupEvidence {
    NodeId node = 0;
    unsigned bucket = 0; ///< 1-based bucket from the VRF output, before merging
    VrfOutput output;
    VrfProof proof;
};

/// Partition of the node set into groups 1..group_count.
struct GroupAssignment {
    std::uint64_t epoch = 0;
    unsigned group_count = 0;
    /// members[i - 1] lists group i in ascending id order.
    std::vector<std::vector<NodeId>> members;
    /// Sorted by node id.
    std::vector<GroupEvidence> evidence;

    /// 1-based group of `node`; 0 if the node is not assigned.
    unsigned group_of(NodeId node) const;
    std::size_t node_count() const;
    const std::vector<NodeId> &group(unsigned index) const { return members.at(index - 1); }

private:
    friend GroupAssignment assign_groups(const Vrf &, std::span<const NodeRecord>, unsigned, std::uint64_t);
    friend GroupAssignment merge_singletons(GroupAssignment, ByteView);
    void rebuild_index();
    std::vector<unsigned> group_of_; // indexed by node id
};

/// Big-endian epoch counter, the VRF input for grouping.
Bytes epoch_input(std::uint64_t epoch);

/// floor(u * phi) + 1, clamped to phi.
unsigned bucket_for_unit(double u, unsigned phi);
unsigned bucket_for_output(const VrfOutput &output, unsigned phi);

/// Buckets every node by its VRF output on epoch_input(epoch). Throws
/// InputError for phi == 0 or fewer than two nodes.
GroupAssignment assign_groups(const Vrf &vrf, std::span<const NodeRecord> nodes, unsigned phi, std::uint64_t epoch);

/// Folds each size-1 group into a seeded pseudo-random other group, then
/// drops empty groups and renumbers the rest from 1.
GroupAssignment merge_singletons(GroupAssignment assignment, ByteView rng_seed);

/// Third-party check of one node's raw bucket.
bool verify_bucket(const Vrf &vrf, const AffinePoint &public_key, std::uint64_t epoch, unsigned phi, const GroupEvidence &ev);

/// {epoch, phi, nodes: [{node, group, vrf_output_hex, proof_hex}]}
nlohmann::json assignment_to_json(const GroupAssignment &assignment, const Vrf &vrf);

} // namespace hldpos
