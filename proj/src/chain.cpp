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
#include "hldpos/chain.hpp"

#include "hldpos/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <unordered_set>

namespace hldpos {

namespace {

struct DigestHash {
    std::size_t operator()(const Digest &d) const noexcept { return static_cast<std::size_t>(digest_prefix_u64(d)); }
};

using DigestSet = std::unordered_set<Digest, DigestHash>;

std::string height_str(std::uint64_t h) { return std::to_string(h); }

} // namespace

Transaction Transaction::make(NodeId sender, NodeId receiver, Tokens amount, RoundId round, std::uint64_t nonce)
{
    if (amount <= 0)
        throw InputError("transaction amount must be positive");
    Transaction tx{Digest{}, sender, receiver, amount, round, nonce};
    tx.id = tx.compute_id();
    return tx;
}

Digest Transaction::compute_id() const
{
    return HashInput{}
        .add("tx")
        .add_u32(sender)
        .add_u32(receiver)
        .add_u64(static_cast<std::uint64_t>(amount))
        .add_u64(round)
        .add_u64(nonce)
        .digest();
}

Digest merkle_root_of_ids(std::span<const Digest> ids)
{
    if (ids.empty()) return Digest{};
    std::vector<Digest> layer(ids.begin(), ids.end());
    do {
        if (layer.size() % 2 == 1) layer.push_back(layer.back());
        std::vector<Digest> next;
        next.reserve(layer.size() / 2);
        for (std::size_t i = 0; i < layer.size(); i += 2)
            next.push_back(HashInput{}.add(ByteView(layer[i])).add(ByteView(layer[i + 1])).digest());
        layer = std::move(next);
    } while (layer.size() > 1);
    return layer.front();
}

Digest merkle_root(std::span<const Transaction> txs)
{
    std::vector<Digest> ids;
    ids.reserve(txs.size());
    for (const auto &tx : txs)
        ids.push_back(tx.id);
    return merkle_root_of_ids(ids);
}

Digest Block::header_hash() const
{
    return HashInput{}.add("block").add_u64(height).add(ByteView(prev)).add_u32(producer).add(ByteView(merkle_root)).digest();
}

Block Block::seal(std::uint64_t height, const Digest &prev, NodeId producer, std::vector<Transaction> txs)
{
    Block b;
    b.height = height;
    b.prev = prev;
    b.producer = producer;
    b.txs = std::move(txs);
    b.merkle_root = hldpos::merkle_root(b.txs);
    b.hash = b.header_hash();
    return b;
}

bool Block::self_consistent() const
{
    for (const auto &tx : txs)
        if (tx.compute_id() != tx.id) return false;
    return merkle_root == hldpos::merkle_root(txs) && hash == header_hash();
}

Chain Chain::genesis()
{
    static const BlockPtr block = std::make_shared<const Block>(Block::seal(0, Digest{}, genesis_producer, {}));
    Chain c;
    c.blocks_.push_back(block);
    return c;
}

std::optional<std::uint64_t> Chain::find_tx(const Digest &tx) const
{
    for (const auto &b : blocks_)
        for (const auto &t : b->txs)
            if (t.id == tx) return b->height;
    return std::nullopt;
}

void Chain::append(Block block) { append(std::make_shared<const Block>(std::move(block))); }

void Chain::append(BlockPtr block)
{
    if (blocks_.empty()) {
        if (block->height != 0 || block->prev != Digest{} || !block->self_consistent())
            throw AppendError("an empty chain only accepts a root block at height 0");
        blocks_.push_back(std::move(block));
        return;
    }
    if (block->prev != tip_hash())
        throw AppendError("block at height " + height_str(block->height) + " does not link to the chain tip");
    if (block->height != tip_height() + 1)
        throw AppendError("block height " + height_str(block->height) + " does not follow tip height " +
                          height_str(tip_height()));
    if (block->merkle_root != merkle_root(block->txs))
        throw IntegrityError("block at height " + height_str(block->height) + " has a Merkle root mismatch");
    if (block->hash != block->header_hash())
        throw IntegrityError("block at height " + height_str(block->height) + " has a hash mismatch");
    blocks_.push_back(std::move(block));
}

bool Chain::well_formed() const
{
    if (blocks_.empty() || blocks_.front()->hash != genesis().tip_hash()) return false;
    for (std::size_t h = 1; h < blocks_.size(); ++h) {
        const Block &b = *blocks_[h];
        if (b.height != h || b.prev != blocks_[h - 1]->hash || !b.self_consistent()) return false;
    }
    return true;
}

Chain Chain::prefix(std::uint64_t height) const
{
    Chain c;
    c.owner = owner;
    auto count = std::min<std::size_t>(height, blocks_.size());
    c.blocks_.assign(blocks_.begin(), blocks_.begin() + static_cast<std::ptrdiff_t>(count));
    return c;
}

Chain append_block(Chain chain, Block block)
{
    chain.append(std::move(block));
    return chain;
}

const Chain &select_longest(const Chain &local, const Chain &received)
{
    if (local.length() == 0 || received.length() == 0 || local.at(0).hash != received.at(0).hash)
        throw IncompatibleChainError("chains do not share a genesis block");
    return received.length() > local.length() ? received : local;
}

std::vector<Digest> diff_transactions(std::span<const BlockPtr> local_blocks, const Chain &received)
{
    DigestSet present;
    for (const auto &b : received.blocks())
        for (const auto &tx : b->txs)
            present.insert(tx.id);
    std::vector<Digest> missing;
    for (const auto &b : local_blocks)
        for (const auto &tx : b->txs)
            if (!present.contains(tx.id)) missing.push_back(tx.id);
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    return missing;
}

VerifyResult verify_longest_chain(const Chain &local, const Chain &received, unsigned confirmation_depth)
{
    if (received.length() <= local.length())
        throw InputError("verify_longest_chain: received chain must be strictly longer than the local chain");

    if (!received.well_formed()) {
        Reject r;
        r.cause = Reject::Cause::integrity;
        r.broadcaster = received.owner;
        r.detail = "received chain has broken links, heights or commitments";
        return r;
    }

    // Step 1: first height where the block ids differ
    std::uint64_t h1 = 0;
    const std::uint64_t common = local.length();
    while (h1 < common && local.at(h1).hash == received.at(h1).hash)
        ++h1;
    if (h1 == common) return Accept{};

    // Step 2: equal roots mean equal transaction sets; keep scanning upward
    std::uint64_t fork = h1;
    while (fork < common && local.at(fork).merkle_root == received.at(fork).merkle_root)
        ++fork;
    if (fork == common) return Accept{};

    // Step 3: consensus transactions at or above the fork missing anywhere in received
    std::uint64_t consensus_end = common; // exclusive
    if (confirmation_depth > 1)
        consensus_end = common >= confirmation_depth - 1 ? common - (confirmation_depth - 1) : 0;
    if (fork >= consensus_end) return Accept{};
    std::span<const BlockPtr> scan(local.blocks().data() + fork, consensus_end - fork);
    std::vector<Digest> missing = diff_transactions(scan, received);
    if (missing.empty()) return Accept{};

    Reject r;
    r.cause = Reject::Cause::missing_transactions;
    r.missing_txs = std::move(missing);
    r.fork_height = fork;
    r.offender = received.at(fork).producer;
    r.broadcaster = received.owner;
    r.detail = std::to_string(r.missing_txs.size()) + " consensus transaction(s) missing from received chain";
    return r;
}

std::string chain_to_jsonl(const Chain &chain)
{
    std::string out;
    for (const auto &b : chain.blocks()) {
        nlohmann::json txids = nlohmann::json::array();
        for (const auto &tx : b->txs)
            txids.push_back(to_hex(tx.id));
        nlohmann::json line = {{"height", b->height},
                               {"hash", to_hex(b->hash)},
                               {"prev", to_hex(b->prev)},
                               {"producer", b->producer},
                               {"merkle_root", to_hex(b->merkle_root)},
                               {"txids", std::move(txids)}};
        out += line.dump();
        out += '\n';
    }
    return out;
}

} // namespace hldpos
