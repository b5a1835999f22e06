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

#include "hldpos/crypto/hash.hpp"
#include "hldpos/types.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hldpos {

struct Transaction {
    Digest id{};
    NodeId sender = 0;
    NodeId receiver = 0;
    Tokens amount = 0;
    RoundId round = 0;
    std::uint64_t nonce = 0;

    /// Builds a transaction and computes its id. Throws InputError unless
    /// amount > 0.
    static Transaction make(NodeId sender, NodeId receiver, Tokens amount, RoundId round, std::uint64_t nonce);
    Digest compute_id() const;

    bool operator==(const Transaction &) const = default;
};

/// Sentinel producer id of the genesis block.
inline constexpr NodeId genesis_producer = 0xffffffffu;

struct Block {
    std::uint64_t height = 0;
    Digest prev{};
    NodeId producer = 0;
    Digest merkle_root{};
    std::vector<Transaction> txs;
    Digest hash{};

    /// Computes merkle_root from txs and hash from the header.
    static Block seal(std::uint64_t height, const Digest &prev, NodeId producer, std::vector<Transaction> txs);
    Digest header_hash() const;
    /// Hash matches header and root matches transactions.
    bool self_consistent() const;
};

using BlockPtr = std::shared_ptr<const Block>;

/// Binary Merkle root over transaction ids in list order. Odd layers repeat
/// their last node; an empty list gives the all-zero root; a single
/// transaction gives H(id ‖ id).
Digest merkle_root(std::span<const Transaction> txs);
Digest merkle_root_of_ids(std::span<const Digest> ids);

/// Immutable-block chain snapshot. Copies share block storage.
class Chain {
public:
    /// Chain holding only the network-wide genesis block.
    static Chain genesis();

    std::size_t length() const noexcept { return blocks_.size(); }
    std::uint64_t tip_height() const { return blocks_.back()->height; }
    const Digest &tip_hash() const { return blocks_.back()->hash; }
    const Block &at(std::uint64_t height) const { return *blocks_.at(height); }
    const Block &tip() const { return *blocks_.back(); }
    const std::vector<BlockPtr> &blocks() const noexcept { return blocks_; }

    NodeId owner = genesis_producer;

    /// Height of the block carrying `tx`, if any.
    std::optional<std::uint64_t> find_tx(const Digest &tx) const;

    /// Throws AppendError on linkage or height mismatch and IntegrityError
    /// on a bad Merkle root or block hash; *this is left unchanged. An empty
    /// chain accepts any self-consistent height-0 block as its root.
    void append(Block block);
    void append(BlockPtr block);

    /// Structural validity: hash links, heights, roots, genesis.
    bool well_formed() const;

    /// Same chain truncated to heights [0, height).
    Chain prefix(std::uint64_t height) const;

private:
    std::vector<BlockPtr> blocks_;
};

/// Functional form of Chain::append.
Chain append_block(Chain chain, Block block);

/// Longer chain wins; ties keep `local`. Throws IncompatibleChainError if
/// the genesis blocks differ.
const Chain &select_longest(const Chain &local, const Chain &received);

struct Accept {};

struct Reject {
    enum class Cause { missing_transactions, integrity };
    Cause cause = Cause::missing_transactions;
    std::vector<Digest> missing_txs;
    std::uint64_t fork_height = 0;
    NodeId offender = genesis_producer;    ///< producer of the received block at fork_height
    NodeId broadcaster = genesis_producer; ///< owner of the received chain
    std::string detail;
};

using VerifyResult = std::variant<Accept, Reject>;

inline bool accepted(const VerifyResult &r) { return std::holds_alternative<Accept>(r); }

/// Transactions of `local_blocks` absent from every block of `received`,
/// as a sorted, duplicate-free id list.
std::vector<Digest> diff_transactions(std::span<const BlockPtr> local_blocks, const Chain &received);

/// Longest chain verification. Finds the first height where block hashes
/// differ, moves up to the first height where Merkle roots differ, and
/// rejects if any consensus transaction of `local` at or above that height
/// is missing from the whole of `received`. A transaction is consensus
/// once its block is at depth >= confirmation_depth (tip depth is 1).
/// Malformed received chains are rejected with Cause::integrity.
/// Precondition: received is strictly longer than local (InputError).
VerifyResult verify_longest_chain(const Chain &local, const Chain &received, unsigned confirmation_depth = 1);

/// One JSON object per line: {height, hash, prev, producer, merkle_root, txids}.
std::string chain_to_jsonl(const Chain &chain);

} // namespace hldpos
