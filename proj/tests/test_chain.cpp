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
#include "hldpos/chain.hpp"
#include "hldpos/error.hpp"
#include "hldpos/rng.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

using namespace hldpos;

namespace {

Transaction tx(NodeId s, std::uint64_t nonce, RoundId round = 1) { return Transaction::make(s, s + 1, 3, round, nonce); }

// Pairwise hash used as the reference for merkle_root.
Digest pair_hash(const Digest &l, const Digest &r)
{
    Bytes b(l.begin(), l.end());
    b.insert(b.end(), r.begin(), r.end());
    return sha256(b);
}

Chain grow(Chain c, std::size_t blocks, std::size_t per_block, NodeId producer, std::uint64_t &nonce)
{
    for (std::size_t i = 0; i < blocks; ++i) {
        std::vector<Transaction> txs;
        for (std::size_t t = 0; t < per_block; ++t)
            txs.push_back(tx(static_cast<NodeId>(t), nonce++));
        c.append(Block::seal(c.tip_height() + 1, c.tip_hash(), producer, std::move(txs)));
    }
    return c;
}

} // namespace

TEST_CASE("frozen transaction and block hashes")
{
    // tests/oracles/vectors.py
    auto t = Transaction::make(1, 2, 5, 3, 9);
    CHECK(to_hex(t.id) == "88be5082ec15b3dd8473018a3caba7edd50cfa99a56c5deb12eff794e94d2b73");
    CHECK(to_hex(Chain::genesis().tip_hash()) == "e25ae56821e9081d703ada300adcd0d3e9e5d2f0a63538eb117eb98b2e17d20b");
    auto b = Block::seal(1, Chain::genesis().tip_hash(), 7, {t});
    CHECK(to_hex(b.merkle_root) == "902adf234e890e8495040f25cc947f329341f4e3a865000b3b659134826ff45f");
    CHECK(to_hex(b.hash) == "fd0df217db5f7cce7222e22a4e88a5dff55c1483d7d139d3913e31ab6c9780e2");
    CHECK_THROWS_AS(Transaction::make(1, 2, 0, 1, 1), InputError);
}

TEST_CASE("merkle root")
{
    CHECK(merkle_root(std::vector<Transaction>{}) == Digest{});
    auto a = tx(1, 1), b = tx(2, 2), c = tx(3, 3), d = tx(4, 4);
    CHECK(merkle_root(std::vector{a}) == pair_hash(a.id, a.id));
    CHECK(merkle_root(std::vector{a, b, c, d}) == pair_hash(pair_hash(a.id, b.id), pair_hash(c.id, d.id)));
    CHECK(merkle_root(std::vector{a, b, c}) == pair_hash(pair_hash(a.id, b.id), pair_hash(c.id, c.id)));
    CHECK(merkle_root(std::vector{a, b}) != merkle_root(std::vector{b, a}));
}

TEST_CASE("merkle binding under single-transaction mutation")
{
    std::vector<Transaction> txs;
    for (std::uint64_t i = 0; i < 37; ++i)
        txs.push_back(tx(static_cast<NodeId>(i), i));
    Digest root = merkle_root(txs);
    for (std::size_t i = 0; i < txs.size(); ++i) {
        auto mutated = txs;
        mutated[i] = Transaction::make(mutated[i].sender, mutated[i].receiver, mutated[i].amount + 1, mutated[i].round,
                                       mutated[i].nonce);
        REQUIRE(merkle_root(mutated) != root);
        auto dropped = txs;
        dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(i));
        REQUIRE(merkle_root(dropped) != root);
    }
}

TEST_CASE("append checks linkage and commitments")
{
    Chain c = Chain::genesis();
    auto b1 = Block::seal(1, c.tip_hash(), 4, {tx(1, 1)});
    c.append(b1);
    CHECK(c.length() == 2);
    CHECK(c.well_formed());

    auto wrong_prev = Block::seal(2, Digest{}, 4, {});
    CHECK_THROWS_AS(c.append(wrong_prev), AppendError);
    CHECK(c.length() == 2);

    auto wrong_height = Block::seal(3, c.tip_hash(), 4, {});
    CHECK_THROWS_AS(c.append(wrong_height), AppendError);

    auto tampered = Block::seal(2, c.tip_hash(), 4, {tx(2, 2)});
    tampered.txs[0] = tx(2, 3);
    CHECK_THROWS_AS(c.append(tampered), IntegrityError);

    auto bad_hash = Block::seal(2, c.tip_hash(), 4, {});
    bad_hash.producer = 5;
    CHECK_THROWS_AS(c.append(bad_hash), IntegrityError);
    CHECK(c.length() == 2);

    Chain d = append_block(c, Block::seal(2, c.tip_hash(), 4, {}));
    CHECK(d.length() == 3);
    CHECK(c.length() == 2);
}

TEST_CASE("select_longest")
{
    std::uint64_t nonce = 0;
    Chain a = grow(Chain::genesis(), 4, 1, 1, nonce);
    Chain b = grow(Chain::genesis(), 6, 1, 2, nonce);
    CHECK(&select_longest(a, b) == &b);
    CHECK(&select_longest(b, a) == &b);
    Chain c = grow(Chain::genesis(), 4, 2, 3, nonce);
    CHECK(&select_longest(a, c) == &a);
    Chain ext = grow(a, 2, 1, 1, nonce);
    CHECK(&select_longest(a, ext) == &ext);
    CHECK_THROWS_AS(select_longest(a, Chain{}), IncompatibleChainError);
}

TEST_CASE("diff_transactions")
{
    std::uint64_t nonce = 0;
    Chain local = grow(Chain::genesis(), 3, 1, 1, nonce); // t0 t1 t2
    CHECK(diff_transactions(local.blocks(), local).empty());

    // received holds t0 and t2 at other heights only
    Chain received = Chain::genesis();
    received.append(Block::seal(1, received.tip_hash(), 2, {local.at(3).txs[0]}));
    received.append(Block::seal(2, received.tip_hash(), 2, {local.at(1).txs[0]}));
    auto missing = diff_transactions(local.blocks(), received);
    REQUIRE(missing.size() == 1);
    CHECK(missing[0] == local.at(2).txs[0].id);

    SUBCASE("randomized set difference")
    {
        std::vector<Transaction> all;
        for (std::uint64_t i = 0; i < 100; ++i)
            all.push_back(tx(static_cast<NodeId>(i % 9), 1000 + i));
        SeededRng rng(5);
        std::vector<Digest> dropped;
        std::vector<Transaction> kept = all;
        while (dropped.size() < 7) {
            auto i = rng.index(kept.size());
            dropped.push_back(kept[i].id);
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
        }
        std::sort(dropped.begin(), dropped.end());
        Chain l = Chain::genesis(), r = Chain::genesis();
        for (std::size_t i = 0; i < all.size(); i += 10)
            l.append(Block::seal(l.tip_height() + 1, l.tip_hash(), 1,
                                 std::vector<Transaction>(all.begin() + static_cast<std::ptrdiff_t>(i),
                                                          all.begin() + static_cast<std::ptrdiff_t>(i + 10))));
        std::reverse(kept.begin(), kept.end());
        r.append(Block::seal(1, r.tip_hash(), 2, kept));
        CHECK(diff_transactions(l.blocks(), r) == dropped);
    }
}

TEST_CASE("verify_longest_chain")
{
    std::uint64_t nonce = 0;
    Chain local = grow(Chain::genesis(), 6, 3, 1, nonce);

    SUBCASE("pure extension is accepted")
    {
        Chain ext = grow(local, 2, 1, 2, nonce);
        CHECK(accepted(verify_longest_chain(local, ext)));
    }
    SUBCASE("a fork that keeps every transaction is accepted")
    {
        Chain reordered = local.prefix(4);
        for (std::uint64_t h = 4; h <= local.tip_height(); ++h) {
            auto txs = local.at(h).txs;
            std::reverse(txs.begin(), txs.end());
            reordered.append(Block::seal(h, reordered.tip_hash(), 8, txs));
        }
        reordered.append(Block::seal(reordered.tip_height() + 1, reordered.tip_hash(), 8, {}));
        CHECK(accepted(verify_longest_chain(local, reordered)));
    }
    SUBCASE("equal roots with different headers keep scanning upward")
    {
        Chain other = local.prefix(3);
        other.append(Block::seal(3, other.tip_hash(), 9, local.at(3).txs)); // same root, new producer
        for (std::uint64_t h = 4; h <= local.tip_height(); ++h)
            other.append(Block::seal(h, other.tip_hash(), 9, {}));
        other.append(Block::seal(other.tip_height() + 1, other.tip_hash(), 9, {}));
        auto v = verify_longest_chain(local, other);
        REQUIRE_FALSE(accepted(v));
        CHECK(std::get<Reject>(v).fork_height == 4);
    }
    SUBCASE("hiding a transaction is rejected with the forking producer")
    {
        const auto &target = local.at(4).txs[1];
        Chain forged = local.prefix(4);
        forged.owner = 33;
        auto txs = local.at(4).txs;
        txs.erase(txs.begin() + 1);
        forged.append(Block::seal(4, forged.tip_hash(), 21, txs));
        forged.append(Block::seal(5, forged.tip_hash(), 22, local.at(5).txs));
        forged.append(Block::seal(6, forged.tip_hash(), 22, local.at(6).txs));
        forged.append(Block::seal(7, forged.tip_hash(), 22, {}));
        auto v = verify_longest_chain(local, forged);
        REQUIRE_FALSE(accepted(v));
        const auto &r = std::get<Reject>(v);
        CHECK(r.cause == Reject::Cause::missing_transactions);
        CHECK(r.missing_txs == std::vector<Digest>{target.id});
        CHECK(r.fork_height == 4);
        CHECK(r.offender == 21);
        CHECK(r.broadcaster == 33);
    }
    SUBCASE("confirmation depth exempts the unconfirmed tip")
    {
        Chain forged = local.prefix(6);
        auto txs = local.at(6).txs;
        txs.pop_back();
        forged.append(Block::seal(6, forged.tip_hash(), 5, txs));
        forged.append(Block::seal(7, forged.tip_hash(), 5, {}));
        CHECK_FALSE(accepted(verify_longest_chain(local, forged, 1)));
        CHECK(accepted(verify_longest_chain(local, forged, 2)));
    }
    SUBCASE("foreign genesis is an integrity failure")
    {
        Chain foreign;
        foreign.owner = 12;
        foreign.append(Block::seal(0, Digest{}, 12, {}));
        for (std::uint64_t h = 1; h <= local.tip_height() + 1; ++h)
            foreign.append(Block::seal(h, foreign.tip_hash(), 12, {}));
        CHECK_FALSE(foreign.well_formed());
        auto v = verify_longest_chain(local, foreign);
        REQUIRE_FALSE(accepted(v));
        CHECK(std::get<Reject>(v).cause == Reject::Cause::integrity);
        CHECK(std::get<Reject>(v).broadcaster == 12);
        CHECK_THROWS_AS(select_longest(local, foreign), IncompatibleChainError);
    }
    SUBCASE("received must be strictly longer")
    {
        CHECK_THROWS_AS(verify_longest_chain(local, local), InputError);
    }
}

TEST_CASE("chain dump as JSON lines")
{
    std::uint64_t nonce = 0;
    Chain c = grow(Chain::genesis(), 2, 2, 6, nonce);
    std::istringstream in(chain_to_jsonl(c));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        CHECK(j["height"] == n);
        CHECK(j["hash"] == to_hex(c.at(n).hash));
        CHECK(j["txids"].size() == c.at(n).txs.size());
        ++n;
    }
    CHECK(n == 3);
}
