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

#include "hldpos/adversary.hpp"
#include "hldpos/error.hpp"

using namespace hldpos;

namespace {

// Ten blocks past genesis, two transactions each; node 4 sends the second
// transaction of block 7.
Chain sample_chain()
{
    Chain c = Chain::genesis();
    c.owner = 1;
    std::uint64_t nonce = 0;
    for (std::uint64_t h = 1; h <= 9; ++h) {
        NodeId s = h == 7 ? 4 : static_cast<NodeId>(10 + h);
        std::vector<Transaction> txs{Transaction::make(20, 21, 1, h, nonce++), Transaction::make(s, 22, 2, h, nonce++)};
        c.append(Block::seal(h, c.tip_hash(), 1, std::move(txs)));
    }
    return c;
}

} // namespace

TEST_CASE("behavior names round trip")
{
    for (auto b : {Behavior::honest, Behavior::hide_own_tx_fork, Behavior::wrong_tx, Behavior::timeout, Behavior::tamper,
                   Behavior::collude_silent})
        CHECK(parse_behavior(to_string(b)) == b);
    CHECK_THROWS_AS(parse_behavior("sleepy"), InputError);
}

TEST_CASE("plan_behavior honours the activation range")
{
    AdversarySpec spec;
    spec.behaviors = {{3, Behavior::timeout}};
    spec.first_round = 5;
    spec.last_round = 7;
    CHECK(plan_behavior(spec, 3, 4) == Behavior::honest);
    CHECK(plan_behavior(spec, 3, 5) == Behavior::timeout);
    CHECK(plan_behavior(spec, 3, 7) == Behavior::timeout);
    CHECK(plan_behavior(spec, 3, 8) == Behavior::honest);
    CHECK(plan_behavior(spec, 2, 6) == Behavior::honest);
}

TEST_CASE("spec validation")
{
    AdversarySpec spec;
    spec.behaviors = {{1, Behavior::tamper}};
    spec.collusion = {1};
    CHECK_NOTHROW(spec.validate());
    spec.collusion = {1, 2};
    CHECK_THROWS_AS(spec.validate(), ParameterError);
    spec.collusion = {1};
    spec.first_round = 9;
    spec.last_round = 3;
    CHECK_THROWS_AS(spec.validate(), ParameterError);
}

TEST_CASE("stays_silent")
{
    AdversarySpec spec;
    spec.behaviors = {{1, Behavior::hide_own_tx_fork}, {2, Behavior::honest}, {3, Behavior::collude_silent},
                      {4, Behavior::wrong_tx}};
    spec.collusion = {1, 2};
    CHECK_FALSE(stays_silent(spec, 9, 1, 1)); // honest inspector
    CHECK(stays_silent(spec, 2, 1, 1));       // both colluding
    CHECK(stays_silent(spec, 3, 4, 1));       // silent toward everyone
    CHECK_FALSE(stays_silent(spec, 2, 4, 1)); // offender outside the set
    CHECK_FALSE(stays_silent(spec, 4, 1, 1)); // inspector outside the set
    spec.first_round = 2;
    CHECK_FALSE(stays_silent(spec, 2, 1, 1)); // inactive round
}

TEST_CASE("build_fork erases the target from h1 upward")
{
    Chain local = sample_chain();
    REQUIRE(local.length() == 10);
    const Digest target = local.at(7).txs[1].id;

    Chain fork = build_fork(4, local, target);
    CHECK(fork.length() == 11);
    CHECK(fork.owner == 4);
    CHECK(fork.well_formed());
    CHECK_FALSE(fork.find_tx(target));
    for (std::uint64_t h = 0; h < 7; ++h)
        CHECK(fork.at(h).hash == local.at(h).hash);
    for (std::uint64_t h = 7; h < fork.length(); ++h)
        CHECK(fork.at(h).producer == 4);
    CHECK(fork.at(7).txs.size() == 1);
    CHECK(fork.at(8).txs == local.at(8).txs);
    CHECK(fork.tip().txs.empty());

    auto v = verify_longest_chain(local, fork);
    REQUIRE_FALSE(accepted(v));
    const auto &r = std::get<Reject>(v);
    CHECK(r.missing_txs == std::vector<Digest>{target});
    CHECK(r.fork_height == 7);
    CHECK(r.offender == 4);

    CHECK(build_fork(4, local, target, 3).length() == 13);
}

TEST_CASE("build_fork on a target in the tip block")
{
    Chain local = sample_chain();
    Chain c = local;
    c.append(Block::seal(10, c.tip_hash(), 1, {Transaction::make(4, 9, 1, 10, 999)}));
    const Digest target = c.tip().txs[0].id;
    Chain fork = build_fork(4, c, target);
    CHECK(fork.length() == c.length() + 1);
    CHECK(fork.at(10).txs.empty());
    CHECK(latest_tx_from(c, 4) == target);
    CHECK(latest_tx_from(local, 4) == local.at(7).txs[1].id);
    CHECK_FALSE(latest_tx_from(local, 77));
}

TEST_CASE("build_fork errors")
{
    Chain local = sample_chain();
    CHECK_THROWS_AS(build_fork(4, local, Digest{}), InputError);
    CHECK_THROWS_AS(build_fork(5, local, local.at(7).txs[1].id), InputError);
    CHECK_THROWS_AS(build_fork(4, local, local.at(7).txs[1].id, 0), InputError);
}
