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

#include "hldpos/adversary.hpp"
#include "hldpos/chain.hpp"
#include "hldpos/crypto/vrf.hpp"
#include "hldpos/election.hpp"
#include "hldpos/grouping.hpp"
#include "hldpos/types.hpp"

#include <json.hpp>

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hldpos {

struct EngineConfig {
    Tokens token_R = 10; ///< producer reward
    Tokens token_V = 1;  ///< reward per voter of a good voted producer
    Tokens PA = 50;      ///< witness penalty
    Tokens PV = 5;       ///< voter penalty
    double slot_seconds = 12.42;
    unsigned confirmation_depth = 1;
    std::size_t block_capacity = 200;
    unsigned fork_extension = 1;

    /// Throws ParameterError unless token_R >= token_V, 0 <= PV < PA,
    /// slot_seconds > 0 and capacity, depth and extension are positive.
    void validate() const;
};

enum class AuditCause { deposit, reward_producer, reward_voter, penalty_offender, penalty_silent, penalty_voter, bounty };
const char *to_string(AuditCause c);

struct AuditEntry {
    RoundId round = 0;
    NodeId node = 0;
    Tokens delta = 0;
    AuditCause cause = AuditCause::deposit;
    Tokens shortfall = 0; ///< part of a penalty the balance could not cover
};

struct RoundTotals {
    Tokens minted = 0; ///< rewards
    Tokens burned = 0; ///< penalties actually collected
    Tokens bounties = 0;
    Tokens net = 0; ///< sum of all deltas
};

/// Token balances (AT) with an append-only audit log.
class AccountBook {
public:
    void open(NodeId node, Tokens initial);
    bool contains(NodeId node) const { return balances_.contains(node); }
    /// Throws InputError for an unknown node.
    Tokens balance(NodeId node) const;
    void credit(RoundId round, NodeId node, Tokens amount, AuditCause cause);
    /// Debits at most the current balance; returns the amount collected.
    Tokens debit(RoundId round, NodeId node, Tokens amount, AuditCause cause);

    const std::vector<AuditEntry> &log() const noexcept { return log_; }
    RoundTotals totals(RoundId round) const;
    std::map<NodeId, Tokens> deltas(RoundId round) const;
    std::size_t size() const noexcept { return balances_.size(); }

private:
    std::map<NodeId, Tokens> balances_;
    std::vector<AuditEntry> log_;
};

/// Eligible iff AT >= PA. Throws InputError for an unknown node.
bool stake_check(const AccountBook &accounts, NodeId node, const EngineConfig &config);

enum class WitnessStatus { pending, packed_good, faulted, terminated, kicked };
const char *to_string(WitnessStatus s);

enum class FaultKind { late, wrong_tx, data_tamper, hidden_own_tx_fork };
const char *to_string(FaultKind k);

/// One PL position. Tail entries are cycled packers that only inspect.
struct PlEntry {
    unsigned position = 0; ///< 1-based
    NodeId node = 0;
    unsigned group = 0;
    Provenance provenance = Provenance::voted;
    WitnessStatus status = WitnessStatus::pending;
    Behavior behavior = Behavior::honest;
    bool tail = false;
    unsigned origin = 0; ///< packing position of a tail entry
    bool inspected = false;
};

/// What a packing attempt left behind, as seen by later inspectors.
struct Production {
    unsigned position = 0;
    NodeId producer = 0;
    std::optional<Block> block;     ///< absent on timeout
    std::vector<Digest> expected;   ///< ids an honest packer would have packed
    bool appended = false;
    bool accomplice = false;        ///< extended someone else's fork
    std::shared_ptr<const Chain> fork_base, fork;
    bool reported = false;
};

struct MaliciousReport {
    unsigned reporter_position = 0;
    unsigned offender_position = 0;
    NodeId reporter = 0;
    NodeId offender = 0;
    FaultKind kind = FaultKind::late;
    std::vector<std::string> evidence;
};

struct PunishmentOutcome {
    MaliciousReport report;
    bool upheld = false;
    std::string reason; ///< why a report was dismissed
    std::vector<std::pair<NodeId, Tokens>> penalties; ///< requested amounts
    std::vector<NodeId> silent;
    std::vector<NodeId> kicked;
    std::vector<NodeId> penalized_voters;
    std::optional<unsigned> successor_position;
    Tokens bounty = 0;
};

struct BlockSummary {
    std::uint64_t height = 0;
    Digest hash{};
    NodeId producer = 0;
    unsigned position = 0;
    std::size_t tx_count = 0;
};

struct RoundReport {
    RoundId round = 0;
    WitnessList witnesses;
    std::vector<PlEntry> entries;
    std::vector<BlockSummary> blocks;
    std::vector<MaliciousReport> reports;
    std::vector<PunishmentOutcome> punishments;
    std::map<NodeId, Tokens> balance_deltas;
    RoundTotals totals;
    unsigned slots_used = 0;
    unsigned forks_built = 0;
    unsigned forks_detected = 0;
    unsigned forks_adopted = 0;

    nlohmann::json to_json() const;
};

struct StepResult {
    unsigned position = 0;
    NodeId node = 0;
    bool slot_used = false;
    bool block_appended = false;
    std::vector<MaliciousReport> reports;
};

/// base_balance plus a floored exponential draw with mean `mean_extra`, per node.
std::vector<Tokens> initial_balances(std::size_t count, const Digest &seed, Tokens base_balance, double mean_extra);

/// Deterministic key material and initial_balances for `count` nodes
/// (ids 0..count-1). Stake starts equal to the balance.
std::vector<NodeRecord> make_nodes(const Vrf &vrf, std::size_t count, const Digest &seed, Tokens base_balance,
                                   double mean_extra);

/// HL-DPoS round state machine over a node population, a canonical chain
/// and a shared transaction pool.
class Engine {
public:
    Engine(EngineConfig config, ElectionConfig election, AdversarySpec adversary, const Vrf &vrf,
           std::vector<NodeRecord> nodes, unsigned phi, Digest seed, unsigned epoch_rounds = 1);

    // ---- round lifecycle ------------------------------------------------
    /// Regroups (every epoch_rounds), elects and plans the next round.
    void begin_round();
    /// Elects from a given assignment and ballot set.
    void begin_round(const GroupAssignment &assignment, std::span<const Ballot> ballots);
    /// Uses a fixed witness list.
    void begin_round(const WitnessList &witnesses, std::span<const Ballot> ballots);
    /// Advances to the next pending main position: it inspects, then packs.
    /// Returns nullopt once every main position has resolved.
    std::optional<StepResult> step();
    /// Tail inspection, fork adoption and rewards.
    RoundReport finish_round();

    RoundReport run_round();
    RoundReport execute_round(const GroupAssignment &assignment, std::span<const Ballot> ballots);

    bool round_open() const noexcept { return open_; }
    /// Some main position has yet to inspect or pack.
    bool has_pending() const;

    // ---- round-level operations (exposed for inspection and tests) -------
    /// Reports `inspector` at position k would file now, earliest offender first.
    std::vector<MaliciousReport> inspect_and_report(unsigned k) const;
    /// Re-verifies the evidence and applies punishments.
    PunishmentOutcome adjudicate(const MaliciousReport &report);
    /// Detected fault at a production, if any.
    std::optional<MaliciousReport> detect(unsigned position) const;

    // ---- state -----------------------------------------------------------
    void submit(Transaction tx) { pool_.push_back(std::move(tx)); }
    const std::deque<Transaction> &pool() const noexcept { return pool_; }
    const Chain &chain() const noexcept { return chain_; }
    const AccountBook &accounts() const noexcept { return accounts_; }
    AccountBook &accounts() noexcept { return accounts_; }
    const std::vector<PlEntry> &entries() const noexcept { return entries_; }
    const PlEntry &entry(unsigned position) const { return entries_.at(position - 1); }
    const std::map<unsigned, Production> &productions() const noexcept { return productions_; }
    const std::vector<NodeRecord> &nodes() const noexcept { return nodes_; }
    const GroupAssignment &assignment() const noexcept { return assignment_; }
    const WitnessList &witnesses() const noexcept { return witnesses_; }
    const CooldownLedger &cooldowns() const noexcept { return cooldowns_; }
    const EngineConfig &config() const noexcept { return config_; }
    const AdversarySpec &adversary() const noexcept { return adversary_; }
    const std::optional<Chain> &pending_fork() const noexcept { return fork_; }
    RoundId round() const noexcept { return round_; }
    Digest round_seed(RoundId round) const;
    unsigned main_length() const noexcept { return main_length_; }

private:
    void start(WitnessList witnesses, std::vector<Ballot> ballots);
    void pack(PlEntry &entry);
    const Chain &working() const { return fork_ ? *fork_ : chain_; }
    std::vector<Transaction> honest_selection() const;
    void consume_pool(const std::vector<Transaction> &packed);
    void inspect_at(unsigned k, std::vector<MaliciousReport> &filed);
    std::vector<NodeId> voters_of(NodeId node) const;

    EngineConfig config_;
    ElectionConfig election_;
    AdversarySpec adversary_;
    const Vrf &vrf_;
    std::vector<NodeRecord> nodes_;
    unsigned phi_;
    Digest seed_;
    unsigned epoch_rounds_;

    AccountBook accounts_;
    CooldownLedger cooldowns_;
    GroupAssignment assignment_;
    std::optional<std::uint64_t> assignment_epoch_;
    Chain chain_ = Chain::genesis();
    std::optional<Chain> fork_;
    std::deque<Transaction> pool_;
    std::uint64_t fabricated_ = 0;
    std::uint64_t own_tx_nonce_ = 0;
    std::uint64_t round_start_height_ = 0;

    RoundId round_ = 0;
    RoundId next_round_ = 1;
    bool open_ = false;
    WitnessList witnesses_;
    std::vector<Ballot> ballots_;
    std::vector<PlEntry> entries_;
    unsigned main_length_ = 0;
    unsigned cursor_ = 0;
    std::map<unsigned, Production> productions_;
    RoundReport report_;
};

} // namespace hldpos
