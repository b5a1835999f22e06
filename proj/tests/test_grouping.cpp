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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hldpos/engine.hpp"
#include "hldpos/error.hpp"
#include "hldpos/grouping.hpp"

#include <algorithm>
#include <set>

using namespace hldpos;

namespace {

std::vector<NodeRecord> toy_nodes(const Vrf &vrf, std::size_t n, std::uint64_t salt = 0)
{
    std::vector<NodeRecord> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i].id = static_cast<NodeId>(i);
        nodes[i].keys = vrf.keygen(HashInput{}.add_u64(salt).add_u32(static_cast<std::uint32_t>(i)).bytes());
    }
    return nodes;
}

void check_partition(const GroupAssignment &a, std::size_t n)
{
    std::set<NodeId> seen;
    std::size_t total = 0;
    for (unsigned g = 1; g <= a.group_count; ++g) {
        for (NodeId id : a.group(g)) {
            REQUIRE(seen.insert(id).second);
            REQUIRE(a.group_of(id) == g);
        }
        REQUIRE(std::is_sorted(a.group(g).begin(), a.group(g).end()));
        total += a.group(g).size();
    }
    REQUIRE(total == n);
    REQUIRE(a.node_count() == n);
}

} // namespace

TEST_CASE("bucket formula")
{
    CHECK(bucket_for_unit(0.73, 10) == 8);
    CHECK(bucket_for_unit(0.0, 10) == 1);
    CHECK(bucket_for_unit(0.999999999, 10) == 10);
    CHECK(bucket_for_unit(1.0, 10) == 10);
    CHECK(bucket_for_unit(0.5, 1) == 1);
}

TEST_CASE("frozen bucket for a reference output")
{
    // tests/oracles/vectors.py: hash_to_unit(output) = 0.5055866594832622
    VrfOutput out{digest_from_hex("b2b0223cf1fe1f3abd5b13dc1c7e8c984896edc1fea36731bde28affb1b4f752")};
    CHECK(bucket_for_output(out, 10) == 6);
}

TEST_CASE("epoch input is big-endian")
{
    CHECK(epoch_input(1) == Bytes{0, 0, 0, 0, 0, 0, 0, 1});
    CHECK(epoch_input(0x0102) == Bytes{0, 0, 0, 0, 0, 0, 1, 2});
}

TEST_CASE("single group holds every node")
{
    Vrf vrf(CurveParams::toy());
    auto nodes = toy_nodes(vrf, 25);
    auto a = assign_groups(vrf, nodes, 1, 3);
    CHECK(a.group_count == 1);
    CHECK(a.group(1).size() == 25);
    check_partition(a, 25);
}

TEST_CASE("assignment errors")
{
    Vrf vrf(CurveParams::toy());
    auto nodes = toy_nodes(vrf, 3);
    CHECK_THROWS_AS(assign_groups(vrf, nodes, 0, 1), InputError);
    CHECK_THROWS_AS(assign_groups(vrf, std::span<const NodeRecord>(nodes).first(1), 2, 1), InputError);
    CHECK_THROWS_AS(assign_groups(vrf, std::span<const NodeRecord>{}, 2, 1), InputError);
}

TEST_CASE("every bucket is third-party verifiable")
{
    Vrf vrf(CurveParams::p256());
    auto nodes = make_nodes(vrf, 40, sha256("verify"), 100, 10);
    auto a = assign_groups(vrf, nodes, 4, 11);
    check_partition(a, 40);
    for (const auto &ev : a.evidence) {
        REQUIRE(verify_bucket(vrf, nodes[ev.node].keys.public_key, 11, 4, ev));
        REQUIRE(ev.bucket == a.group_of(ev.node));
        REQUIRE_FALSE(verify_bucket(vrf, nodes[ev.node].keys.public_key, 12, 4, ev));
    }
    auto j = assignment_to_json(a, vrf);
    CHECK(j["epoch"] == 11);
    CHECK(j["phi"] == 4);
    CHECK(j["nodes"].size() == 40);
    CHECK(j["nodes"][0]["proof_hex"].get<std::string>().size() == 2 * vrf.proof_size());
}

TEST_CASE("5000 nodes spread evenly over 10 groups")
{
    Vrf vrf(CurveParams::p256());
    auto nodes = make_nodes(vrf, 5000, sha256("spread"), 100, 10);
    auto a = assign_groups(vrf, nodes, 10, 1);
    check_partition(a, 5000);
    for (unsigned g = 1; g <= 10; ++g) {
        CHECK(a.group(g).size() >= 400);
        CHECK(a.group(g).size() <= 600);
    }
}

TEST_CASE("groups reshuffle between epochs")
{
    Vrf vrf(CurveParams::toy());
    auto nodes = toy_nodes(vrf, 200);
    auto a = assign_groups(vrf, nodes, 5, 1);
    auto b = assign_groups(vrf, nodes, 5, 2);
    auto c = assign_groups(vrf, nodes, 5, 1);
    CHECK(a.members == c.members);
    CHECK(a.members != b.members);
}

TEST_CASE("merge_singletons")
{
    Vrf vrf(CurveParams::toy());
    SUBCASE("no singletons leaves the assignment alone")
    {
        auto nodes = toy_nodes(vrf, 100);
        auto a = assign_groups(vrf, nodes, 3, 1);
        auto m = merge_singletons(a, Bytes{1});
        CHECK(m.members == a.members);
        CHECK(m.group_count == a.group_count);
    }
    SUBCASE("singletons fold into other groups deterministically")
    {
        std::size_t with_singletons = 0;
        for (std::uint64_t salt = 0; salt < 60; ++salt) {
            auto nodes = toy_nodes(vrf, 14, salt);
            auto a = assign_groups(vrf, nodes, 10, salt);
            std::size_t singles = 0, empty = 0;
            for (const auto &g : a.members) {
                singles += g.size() == 1;
                empty += g.empty();
            }
            auto m = merge_singletons(a, encode_u64(salt));
            auto again = merge_singletons(a, encode_u64(salt));
            REQUIRE(m.members == again.members);
            check_partition(m, 14);
            for (const auto &g : m.members)
                REQUIRE(g.size() >= 2);
            REQUIRE(m.group_count <= 10 - empty - (singles > 0 ? 1 : 0));
            with_singletons += singles > 0;
        }
        CHECK(with_singletons > 10);
    }
}
