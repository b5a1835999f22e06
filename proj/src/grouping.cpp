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
#include "hldpos/grouping.hpp"

#include "hldpos/error.hpp"
#include "hldpos/rng.hpp"

#include <algorithm>

namespace hldpos {

unsigned GroupAssignment::group_of(NodeId node) const
{
    return node < group_of_.size() ? group_of_[node] : 0;
}

std::size_t GroupAssignment::node_count() const
{
    std::size_t n = 0;
    for (const auto &g : members)
        n += g.size();
    return n;
}

void GroupAssignment::rebuild_index()
{
    NodeId max_id = 0;
    for (const auto &g : members)
        for (NodeId id : g)
            max_id = std::max(max_id, id);
    group_of_.assign(static_cast<std::size_t>(max_id) + 1, 0);
    for (std::size_t i = 0; i < members.size(); ++i)
        for (NodeId id : members[i])
            group_of_[id] = static_cast<unsigned>(i + 1);
}

Bytes epoch_input(std::uint64_t epoch) { return encode_u64(epoch); }

unsigned bucket_for_unit(double u, unsigned phi)
{
    auto bucket = static_cast<unsigned>(u * phi) + 1;
    return std::min(bucket, phi);
}

unsigned bucket_for_output(const VrfOutput &output, unsigned phi)
{
    return bucket_for_unit(hash_to_unit(ByteView(output.value)), phi);
}

GroupAssignment assign_groups(const Vrf &vrf, std::span<const NodeRecord> nodes, unsigned phi, std::uint64_t epoch)
{
    if (phi == 0)
        throw InputError("assign_groups: group count must be positive");
    if (nodes.size() < 2)
        throw InputError("assign_groups: need at least two nodes, got " + std::to_string(nodes.size()));

    Bytes input = epoch_input(epoch);
    GroupAssignment out;
    out.epoch = epoch;
    out.group_count = phi;
    out.members.resize(phi);
    out.evidence.reserve(nodes.size());
    for (const auto &node : nodes) {
        auto [output, proof] = vrf.evaluate(node.keys, input);
        unsigned bucket = bucket_for_output(output, phi);
        out.members[bucket - 1].push_back(node.id);
        out.evidence.push_back(GroupEvidence{node.id, bucket, std::move(output), std::move(proof)});
    }
    for (auto &g : out.members)
        std::sort(g.begin(), g.end());
    std::sort(out.evidence.begin(), out.evidence.end(), [](const auto &l, const auto &r) { return l.node < r.node; });
    for (std::size_t i = 1; i < out.evidence.size(); ++i)
        if (out.evidence[i].node == out.evidence[i - 1].node)
            throw InputError("assign_groups: duplicate node id " + std::to_string(out.evidence[i].node));
    out.rebuild_index();
    return out;
}

GroupAssignment merge_singletons(GroupAssignment assignment, ByteView rng_seed)
{
    if (assignment.node_count() < 2)
        throw InputError("merge_singletons: need at least two nodes");

    auto &groups = assignment.members;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].size() != 1) continue;
        std::vector<std::size_t> targets;
        for (std::size_t j = 0; j < groups.size(); ++j)
            if (j != i && !groups[j].empty()) targets.push_back(j);
        if (targets.empty())
            throw InputError("merge_singletons: no group to merge into");
        SeededRng rng(HashInput{}.add(rng_seed).add_u32(static_cast<std::uint32_t>(i + 1)).digest());
        auto &target = groups[targets[rng.index(targets.size())]];
        target.insert(std::upper_bound(target.begin(), target.end(), groups[i].front()), groups[i].front());
        groups[i].clear();
    }
    std::erase_if(groups, [](const auto &g) { return g.empty(); });
    assignment.group_count = static_cast<unsigned>(groups.size());
    assignment.rebuild_index();
    return assignment;
}

bool verify_bucket(const Vrf &vrf, const AffinePoint &public_key, std::uint64_t epoch, unsigned phi, const GroupEvidence &ev)
{
    Bytes input = epoch_input(epoch);
    if (!vrf.verify(public_key, input, ev.output, ev.proof)) return false;
    return bucket_for_output(ev.output, phi) == ev.bucket;
}

nlohmann::json assignment_to_json(const GroupAssignment &assignment, const Vrf &vrf)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto &ev : assignment.evidence) {
        nodes.push_back({{"node", ev.node},
                         {"group", assignment.group_of(ev.node)},
                         {"vrf_output_hex", to_hex(ev.output.value)},
                         {"proof_hex", to_hex(vrf.serialize_proof(ev.proof))}});
    }
    return {{"epoch", assignment.epoch}, {"phi", assignment.group_count}, {"nodes", std::move(nodes)}};
}

} // namespace hldpos
