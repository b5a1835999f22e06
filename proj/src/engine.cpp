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
#include "hldpos/engine.hpp"

#include "hldpos/error.hpp"
#include "hldpos/rng.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace hldpos {

namespace {

std::vector<Digest> ids_of(const std::vector<Transaction> &txs)
{
    std::vector<Digest> ids;
    ids.reserve(txs.size());
    for (const auto &tx : txs)
        ids.push_back(tx.id);
    return ids;
}

bool is_penalty(AuditCause c)
{
    return c == AuditCause::penalty_offender || c == AuditCause::penalty_silent || c == AuditCause::penalty_voter;
}

} // namespace

// ---- config and accounts -------------------------------------------------

void EngineConfig::validate() const
{
    if (PA <= 0) throw ParameterError("PA must be positive");
    if (PV < 0 || PV >= PA) throw ParameterError("PV must satisfy 0 <= PV < PA");
    if (token_V < 0 || token_R < token_V) throw ParameterError("rewards must satisfy token_R >= token_V >= 0");
    if (!(slot_seconds > 0.0)) throw ParameterError("slot time must be positive");
    if (confirmation_depth == 0) throw ParameterError("confirmation depth must be at least 1");
    if (block_capacity == 0) throw ParameterError("block capacity must be positive");
    if (fork_extension == 0) throw ParameterError("fork extension must be positive");
}

const char *to_string(AuditCause c)
{
    switch (c) {
    case AuditCause::deposit: return "deposit";
    case AuditCause::reward_producer: return "reward_producer";
    case AuditCause::reward_voter: return "reward_voter";
    case AuditCause::penalty_offender: return "penalty_offender";
    case AuditCause::penalty_silent: return "penalty_silent";
    case AuditCause::penalty_voter: return "penalty_voter";
    case AuditCause::bounty: return "bounty";
    }
    return "unknown";
}

const char *to_string(WitnessStatus s)
{
    switch (s) {
    case WitnessStatus::pending: return "pending";
    case WitnessStatus::packed_good: return "packed_good";
    case WitnessStatus::faulted: return "faulted";
    case WitnessStatus::terminated: return "terminated";
    case WitnessStatus::kicked: return "kicked";
    }
    return "unknown";
}

const char *to_string(FaultKind k)
{
    switch (k) {
    case FaultKind::late: return "late";
    case FaultKind::wrong_tx: return "wrong_tx";
    case FaultKind::data_tamper: return "data_tamper";
    case FaultKind::hidden_own_tx_fork: return "hidden_own_tx_fork";
    }
    return "unknown";
}

void AccountBook::open(NodeId node, Tokens initial)
{
    if (initial < 0) throw InputError("initial balance must be non-negative");
    if (!balances_.emplace(node, initial).second)
        throw InputError("account " + std::to_string(node) + " already exists");
    log_.push_back({0, node, initial, AuditCause::deposit, 0});
}

Tokens AccountBook::balance(NodeId node) const
{
    auto it = balances_.find(node);
    if (it == balances_.end()) throw InputError("unknown account " + std::to_string(node));
    return it->second;
}

void AccountBook::credit(RoundId round, NodeId node, Tokens amount, AuditCause cause)
{
    auto it = balances_.find(node);
    if (it == balances_.end()) throw InputError("unknown account " + std::to_string(node));
    it->second += amount;
    log_.push_back({round, node, amount, cause, 0});
}

Tokens AccountBook::debit(RoundId round, NodeId node, Tokens amount, AuditCause cause)
{
    auto it = balances_.find(node);
    if (it == balances_.end()) throw InputError("unknown account " + std::to_string(node));
    Tokens taken = std::min(amount, it->second);
    it->second -= taken;
    log_.push_back({round, node, -taken, cause, amount - taken});
    return taken;
}

RoundTotals AccountBook::totals(RoundId round) const
{
    RoundTotals t;
    for (const auto &e : log_) {
        if (e.round != round || e.cause == AuditCause::deposit) continue;
        t.net += e.delta;
        if (e.cause == AuditCause::bounty) t.bounties += e.delta;
        else if (is_penalty(e.cause)) t.burned -= e.delta;
        else t.minted += e.delta;
    }
    return t;
}

std::map<NodeId, Tokens> AccountBook::deltas(RoundId round) const
{
    std::map<NodeId, Tokens> out;
    for (const auto &e : log_)
        if (e.round == round && e.cause != AuditCause::deposit) out[e.node] += e.delta;
    return out;
}

bool stake_check(const AccountBook &accounts, NodeId node, const EngineConfig &config)
{
    return accounts.balance(node) >= config.PA;
}

// ---- report JSON -----------------------------------------------------------

nlohmann::json RoundReport::to_json() const
{
    using nlohmann::json;
    json blocks_j = json::array();
    for (const auto &b : blocks)
        blocks_j.push_back({{"height", b.height},
                            {"hash", to_hex(b.hash)},
                            {"producer", b.producer},
                            {"position", b.position},
                            {"tx_count", b.tx_count}});
    auto report_j = [](const MaliciousReport &r) {
        return json{{"reporter_position", r.reporter_position},
                    {"offender_position", r.offender_position},
                    {"reporter", r.reporter},
                    {"offender", r.offender},
                    {"kind", to_string(r.kind)},
                    {"evidence", r.evidence}};
    };
    json reports_j = json::array();
    for (const auto &r : reports)
        reports_j.push_back(report_j(r));
    json punish_j = json::array();
    for (const auto &p : punishments) {
        json pen = json::array();
        for (const auto &[node, amount] : p.penalties)
            pen.push_back({{"node", node}, {"amount", amount}});
        json o{{"report", report_j(p.report)},
               {"upheld", p.upheld},
               {"penalties", pen},
               {"silent", p.silent},
               {"kicked", p.kicked},
               {"penalized_voters", p.penalized_voters},
               {"bounty", p.bounty}};
        if (!p.reason.empty()) o["reason"] = p.reason;
        if (p.successor_position) o["successor_position"] = *p.successor_position;
        punish_j.push_back(std::move(o));
    }
    json deltas_j = json::array();
    for (const auto &[node, delta] : balance_deltas)
        deltas_j.push_back({{"node", node}, {"delta", delta}});
    json entries_j = json::array();
    for (const auto &e : entries)
        entries_j.push_back({{"position", e.position},
                             {"node", e.node},
                             {"group", e.group},
                             {"provenance", to_string(e.provenance)},
                             {"status", to_string(e.status)},
                             {"behavior", to_string(e.behavior)},
                             {"tail", e.tail},
                             {"origin", e.origin}});
    return json{{"round", round},
                {"witnesses", witness_list_to_json(witnesses)},
                {"entries", entries_j},
                {"blocks", blocks_j},
                {"reports", reports_j},
                {"punishments", punish_j},
                {"balance_deltas", deltas_j},
                {"totals",
                 {{"minted", totals.minted}, {"burned", totals.burned}, {"bounties", totals.bounties}, {"net", totals.net}}},
                {"slots_used", slots_used},
                {"forks_built", forks_built},
                {"forks_detected", forks_detected},
                {"forks_adopted", forks_adopted}};
}

// ---- nodes -----------------------------------------------------------------

std::vector<Tokens> initial_balances(std::size_t count, const Digest &seed, Tokens base_balance, double mean_extra)
{
    SeededRng rng(HashInput{}.add("node-balances").add(ByteView(seed)).digest());
    std::vector<Tokens> out(count);
    for (auto &b : out)
        b = base_balance + static_cast<Tokens>(rng.exponential(mean_extra));
    return out;
}

std::vector<NodeRecord> make_nodes(const Vrf &vrf, std::size_t count, const Digest &seed, Tokens base_balance,
                                   double mean_extra)
{
    std::vector<NodeRecord> nodes;
    nodes.reserve(count);
    auto balances = initial_balances(count, seed, base_balance, mean_extra);
    for (std::size_t i = 0; i < count; ++i) {
        NodeRecord n;
        n.id = static_cast<NodeId>(i);
        n.keys = vrf.keygen(HashInput{}.add("node-key").add(ByteView(seed)).add_u32(n.id).bytes());
        n.balance = balances[i];
        n.stake = n.balance;
        nodes.push_back(std::move(n));
    }
    return nodes;
}

// ---- engine ----------------------------------------------------------------

Engine::Engine(EngineConfig config, ElectionConfig election, AdversarySpec adversary, const Vrf &vrf,
               std::vector<NodeRecord> nodes, unsigned phi, Digest seed, unsigned epoch_rounds)
    : config_(config), election_(std::move(election)), adversary_(std::move(adversary)), vrf_(vrf),
      nodes_(std::move(nodes)), phi_(phi), seed_(seed), epoch_rounds_(epoch_rounds),
      cooldowns_(election_.rho, election_.fixed_psi)
{
    config_.validate();
    adversary_.validate();
    election_.window.validate();
    if (epoch_rounds_ == 0) throw ParameterError("epoch length must be at least one round");
    if (phi_ == 0) throw ParameterError("group count must be positive");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id != i) throw InputError("node ids must be dense and ordered from 0");
        accounts_.open(nodes_[i].id, nodes_[i].balance);
    }
    for (const auto &[node, behavior] : adversary_.behaviors)
        if (node >= nodes_.size()) throw ParameterError("adversary node " + std::to_string(node) + " does not exist");
}

Digest Engine::round_seed(RoundId round) const
{
    return HashInput{}.add("round").add(ByteView(seed_)).add_u64(round).digest();
}

void Engine::begin_round()
{
    if (open_) throw std::logic_error("begin_round: a round is already open");
    RoundId round = next_round_;
    std::uint64_t epoch = (round - 1) / epoch_rounds_;
    if (assignment_epoch_ != epoch) {
        Digest merge_seed = HashInput{}.add("merge").add(ByteView(seed_)).add_u64(epoch).digest();
        assignment_ = merge_singletons(assign_groups(vrf_, nodes_, phi_, epoch), merge_seed);
        assignment_epoch_ = epoch;
    }
    auto eligible = [this](NodeId n) { return stake_check(accounts_, n, config_); };
    auto votes = [this, round](NodeId n) { return plan_behavior(adversary_, n, round) == Behavior::honest; };
    auto stake = [this](NodeId n) { return accounts_.balance(n); };
    auto ballots = stake_following_ballots(assignment_, stake, eligible, votes, round);
    Digest seed = round_seed(round);
    auto result = run_election(assignment_, ballots, cooldowns_, election_, round, ByteView(seed), eligible);
    start(std::move(result.witnesses), std::move(ballots));
}

void Engine::begin_round(const GroupAssignment &assignment, std::span<const Ballot> ballots)
{
    if (open_) throw std::logic_error("begin_round: a round is already open");
    RoundId round = next_round_;
    assignment_ = assignment;
    assignment_epoch_.reset();
    auto eligible = [this](NodeId n) { return stake_check(accounts_, n, config_); };
    Digest seed = round_seed(round);
    auto result = run_election(assignment_, ballots, cooldowns_, election_, round, ByteView(seed), eligible);
    start(std::move(result.witnesses), std::vector<Ballot>(ballots.begin(), ballots.end()));
}

void Engine::begin_round(const WitnessList &witnesses, std::span<const Ballot> ballots)
{
    start(witnesses, std::vector<Ballot>(ballots.begin(), ballots.end()));
}

void Engine::start(WitnessList witnesses, std::vector<Ballot> ballots)
{
    if (open_) throw std::logic_error("begin_round: a round is already open");
    if (fork_) throw std::logic_error("begin_round: a fork is still pending");
    round_ = next_round_;
    witnesses.round = round_;
    std::set<NodeId> seen;
    for (const auto &w : witnesses.entries) {
        if (!accounts_.contains(w.node)) throw InputError("witness " + std::to_string(w.node) + " has no account");
        if (!seen.insert(w.node).second) throw InputError("witness " + std::to_string(w.node) + " listed twice");
    }
    witnesses_ = std::move(witnesses);
    ballots_ = std::move(ballots);
    entries_.clear();
    productions_.clear();
    for (std::size_t i = 0; i < witnesses_.entries.size(); ++i) {
        const auto &w = witnesses_.entries[i];
        PlEntry e;
        e.position = static_cast<unsigned>(i + 1);
        e.node = w.node;
        e.group = w.group;
        e.provenance = w.provenance;
        e.behavior = plan_behavior(adversary_, w.node, round_);
        entries_.push_back(e);
    }
    main_length_ = static_cast<unsigned>(entries_.size());
    cursor_ = 0;
    report_ = RoundReport{};
    report_.round = round_;
    report_.witnesses = witnesses_;
    round_start_height_ = chain_.tip_height();

    // attackers put a fresh transaction of their own at the head of the pool
    for (auto e = entries_.rbegin(); e != entries_.rend(); ++e) {
        if (e->behavior != Behavior::hide_own_tx_fork) continue;
        NodeId receiver = static_cast<NodeId>((e->node + 1) % std::max<std::size_t>(nodes_.size(), 1));
        pool_.push_front(Transaction::make(e->node, receiver, 1, round_, own_tx_nonce_++));
    }
    open_ = true;
}

std::vector<Transaction> Engine::honest_selection() const
{
    std::size_t n = std::min(config_.block_capacity, pool_.size());
    return std::vector<Transaction>(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(n));
}

void Engine::consume_pool(const std::vector<Transaction> &packed)
{
    if (packed.empty()) return;
    std::set<Digest> ids;
    for (const auto &tx : packed)
        ids.insert(tx.id);
    std::erase_if(pool_, [&](const Transaction &tx) { return ids.contains(tx.id); });
}

std::vector<NodeId> Engine::voters_of(NodeId node) const
{
    std::vector<NodeId> out;
    for (const auto &b : ballots_)
        if (b.candidate == node && b.round == round_) out.push_back(b.voter);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Engine::has_pending() const
{
    for (unsigned i = cursor_; i < main_length_; ++i)
        if (entries_[i].status == WitnessStatus::pending) return true;
    return false;
}

std::optional<StepResult> Engine::step()
{
    if (!open_) throw std::logic_error("step: no open round");
    while (cursor_ < main_length_ && entries_[cursor_].status != WitnessStatus::pending)
        ++cursor_;
    if (cursor_ >= main_length_) return std::nullopt;
    unsigned k = cursor_ + 1;
    ++cursor_;
    StepResult res;
    res.position = k;
    res.node = entries_[k - 1].node;
    inspect_at(k, res.reports);
    if (entries_[k - 1].status == WitnessStatus::pending) {
        pack(entries_[k - 1]);
        res.slot_used = true;
        res.block_appended = productions_.at(k).appended && !productions_.at(k).accomplice;
    }
    return res;
}

void Engine::inspect_at(unsigned k, std::vector<MaliciousReport> &filed)
{
    entries_[k - 1].inspected = true;
    for (auto &r : inspect_and_report(k)) {
        adjudicate(r);
        filed.push_back(std::move(r));
    }
}

void Engine::pack(PlEntry &e)
{
    Production prod;
    prod.position = e.position;
    prod.producer = e.node;
    std::vector<Transaction> selection = honest_selection();
    prod.expected = ids_of(selection);
    ++report_.slots_used;

    auto seal_on = [&](const Chain &base, std::vector<Transaction> txs) {
        return Block::seal(base.tip_height() + 1, base.tip_hash(), e.node, std::move(txs));
    };

    Behavior behavior = e.behavior;
    std::optional<Digest> target;
    if (behavior == Behavior::hide_own_tx_fork) {
        target = latest_tx_from(working(), e.node);
        if (!target) behavior = Behavior::honest;
    }

    switch (behavior) {
    case Behavior::timeout:
        e.status = WitnessStatus::faulted;
        break;
    case Behavior::tamper: {
        Block b = seal_on(working(), selection);
        if (b.txs.empty()) b.merkle_root = HashInput{}.add("tampered").digest();
        else b.txs.front().amount += 1; // id and root now stale
        Chain probe = working();
        try {
            probe.append(b);
        } catch (const Error &) {
        }
        prod.block = std::move(b);
        e.status = WitnessStatus::faulted;
        break;
    }
    case Behavior::wrong_tx: {
        Transaction fake = Transaction::make(e.node, e.node, 1, round_, (std::uint64_t{1} << 63) | fabricated_++);
        std::vector<Transaction> txs = selection;
        if (txs.empty()) txs.push_back(fake);
        else txs.back() = fake;
        Block b = seal_on(working(), txs);
        txs.pop_back();
        if (fork_) fork_->append(b);
        else chain_.append(b);
        consume_pool(txs);
        prod.block = std::move(b);
        prod.appended = true;
        e.status = WitnessStatus::faulted;
        break;
    }
    case Behavior::hide_own_tx_fork: {
        auto base = std::make_shared<const Chain>(working());
        auto fork = std::make_shared<const Chain>(build_fork(e.node, *base, *target, config_.fork_extension));
        prod.fork_base = base;
        prod.fork = fork;
        fork_ = *fork;
        ++report_.forks_built;
        e.status = WitnessStatus::faulted;
        break;
    }
    case Behavior::honest:
    case Behavior::collude_silent:
        if (fork_) {
            // did not report the pending fork, so it builds on it
            Block b = seal_on(*fork_, {});
            fork_->append(b);
            prod.block = std::move(b);
            prod.appended = true;
            prod.accomplice = true;
            e.status = WitnessStatus::faulted;
        } else {
            Block b = seal_on(chain_, selection);
            chain_.append(b);
            consume_pool(selection);
            prod.block = std::move(b);
            prod.appended = true;
            e.status = WitnessStatus::packed_good;
            PlEntry tail = e;
            tail.position = static_cast<unsigned>(entries_.size() + 1);
            tail.status = WitnessStatus::pending;
            tail.tail = true;
            tail.origin = e.position;
            tail.inspected = false;
            productions_.emplace(prod.position, std::move(prod));
            entries_.push_back(tail); // invalidates e
            return;
        }
        break;
    }
    productions_.emplace(prod.position, std::move(prod));
}

std::optional<MaliciousReport> Engine::detect(unsigned position) const
{
    auto it = productions_.find(position);
    if (it == productions_.end() || it->second.accomplice) return std::nullopt;
    const Production &p = it->second;
    MaliciousReport r;
    r.offender_position = position;
    r.offender = p.producer;
    if (p.fork) {
        auto v = verify_longest_chain(*p.fork_base, *p.fork, config_.confirmation_depth);
        if (accepted(v)) return std::nullopt;
        const auto &rej = std::get<Reject>(v);
        r.kind = FaultKind::hidden_own_tx_fork;
        r.evidence.push_back("fork_height=" + std::to_string(rej.fork_height));
        for (const auto &id : rej.missing_txs)
            r.evidence.push_back("missing=" + to_hex(id));
        return r;
    }
    if (!p.block) {
        r.kind = FaultKind::late;
        r.evidence.push_back("no block at position " + std::to_string(position));
        return r;
    }
    if (!p.block->self_consistent()) {
        r.kind = FaultKind::data_tamper;
        r.evidence.push_back("block=" + to_hex(p.block->hash));
        r.evidence.push_back("merkle_root=" + to_hex(p.block->merkle_root));
        return r;
    }
    std::vector<Digest> got = ids_of(p.block->txs);
    if (got != p.expected) {
        r.kind = FaultKind::wrong_tx;
        r.evidence.push_back("block=" + to_hex(p.block->hash));
        std::set<Digest> expected(p.expected.begin(), p.expected.end());
        for (const auto &id : got)
            if (!expected.contains(id)) r.evidence.push_back("unexpected=" + to_hex(id));
        return r;
    }
    return std::nullopt;
}

std::vector<MaliciousReport> Engine::inspect_and_report(unsigned k) const
{
    std::vector<MaliciousReport> out;
    if (k < 2 || k > entries_.size()) return out;
    const PlEntry &inspector = entries_[k - 1];
    for (const auto &[pos, prod] : productions_) {
        if (pos >= k) break;
        if (prod.reported || prod.producer == inspector.node) continue;
        auto found = detect(pos);
        if (!found || stays_silent(adversary_, inspector.node, prod.producer, round_)) continue;
        found->reporter_position = k;
        found->reporter = inspector.node;
        out.push_back(std::move(*found));
    }
    return out;
}

PunishmentOutcome Engine::adjudicate(const MaliciousReport &report)
{
    PunishmentOutcome out;
    out.report = report;
    auto dismiss = [&](std::string why) {
        out.reason = std::move(why);
        report_.punishments.push_back(out);
        return out;
    };
    const unsigned j = report.offender_position, k = report.reporter_position;
    if (j == 0 || j >= k || k > entries_.size()) return dismiss("positions out of order");
    if (report.evidence.empty()) return dismiss("no evidence");
    if (entries_[k - 1].node != report.reporter || entries_[j - 1].node != report.offender)
        return dismiss("positions do not match the named nodes");
    auto prod = productions_.find(j);
    if (prod == productions_.end()) return dismiss("offender has not produced");
    if (prod->second.reported) return dismiss("already adjudicated");
    auto check = detect(j);
    if (!check || check->kind != report.kind) return dismiss("evidence does not re-verify");

    out.upheld = true;
    prod->second.reported = true;
    report_.reports.push_back(report);

    PlEntry &offender = entries_[j - 1];
    offender.status = WitnessStatus::terminated;
    accounts_.debit(round_, offender.node, config_.PA, AuditCause::penalty_offender);
    out.penalties.emplace_back(offender.node, config_.PA);

    std::set<NodeId> fined{offender.node, report.reporter};
    for (unsigned l = j + 1; l < k; ++l) {
        const PlEntry &e = entries_[l - 1];
        if (!e.inspected || !fined.insert(e.node).second) continue;
        accounts_.debit(round_, e.node, config_.PA, AuditCause::penalty_silent);
        out.penalties.emplace_back(e.node, config_.PA);
        out.silent.push_back(e.node);
    }

    for (auto &e : entries_) {
        if (e.group == offender.group && e.status == WitnessStatus::pending && e.node != offender.node) {
            e.status = WitnessStatus::kicked;
            out.kicked.push_back(e.node);
        }
    }
    for (unsigned p = j + 1; p <= main_length_; ++p)
        if (entries_[p - 1].status == WitnessStatus::pending) {
            out.successor_position = p;
            break;
        }

    if (offender.provenance == Provenance::voted) {
        for (NodeId v : voters_of(offender.node)) {
            accounts_.debit(round_, v, config_.PV, AuditCause::penalty_voter);
            out.penalties.emplace_back(v, config_.PV);
            out.penalized_voters.push_back(v);
        }
    }

    out.bounty = config_.PA * static_cast<Tokens>(k - j);
    accounts_.credit(round_, report.reporter, out.bounty, AuditCause::bounty);

    if (prod->second.fork && fork_) {
        const Chain &reported = *prod->second.fork;
        if (fork_->length() >= reported.length() &&
            fork_->at(reported.tip_height()).hash == reported.tip_hash()) {
            fork_.reset();
            ++report_.forks_detected;
        }
    }
    report_.punishments.push_back(out);
    return out;
}

RoundReport Engine::finish_round()
{
    if (!open_) throw std::logic_error("finish_round: no open round");
    if (cursor_ < main_length_)
        while (step()) {
        }
    std::vector<MaliciousReport> filed;
    for (std::size_t i = main_length_; i < entries_.size(); ++i) {
        if (entries_[i].status != WitnessStatus::pending) continue;
        inspect_at(static_cast<unsigned>(i + 1), filed);
        if (entries_[i].status == WitnessStatus::pending) entries_[i].status = WitnessStatus::packed_good;
    }
    if (fork_) {
        chain_ = *fork_;
        fork_.reset();
        ++report_.forks_adopted;
    }

    for (unsigned p = 1; p <= main_length_; ++p) {
        const PlEntry &e = entries_[p - 1];
        if (e.status != WitnessStatus::packed_good) continue;
        accounts_.credit(round_, e.node, config_.token_R, AuditCause::reward_producer);
        if (e.provenance == Provenance::voted)
            for (NodeId v : voters_of(e.node))
                accounts_.credit(round_, v, config_.token_V, AuditCause::reward_voter);
    }

    std::map<std::pair<NodeId, std::uint64_t>, unsigned> position_of;
    for (const auto &[pos, prod] : productions_)
        if (prod.block) position_of[{prod.producer, prod.block->height}] = pos;
    std::uint64_t from = std::min<std::uint64_t>(round_start_height_, chain_.tip_height());
    for (const auto &b : chain_.blocks()) {
        if (b->height <= from) continue;
        auto it = position_of.find({b->producer, b->height});
        report_.blocks.push_back(
            {b->height, b->hash, b->producer, it == position_of.end() ? 0u : it->second, b->txs.size()});
    }
    report_.entries = entries_;
    report_.balance_deltas = accounts_.deltas(round_);
    report_.totals = accounts_.totals(round_);
    open_ = false;
    next_round_ = round_ + 1;
    return report_;
}

RoundReport Engine::run_round()
{
    begin_round();
    while (step()) {
    }
    return finish_round();
}

RoundReport Engine::execute_round(const GroupAssignment &assignment, std::span<const Ballot> ballots)
{
    begin_round(assignment, ballots);
    while (step()) {
    }
    return finish_round();
}

} // namespace hldpos
