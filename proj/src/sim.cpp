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
#include "hldpos/sim.hpp"

#include "hldpos/baselines.hpp"
#include "hldpos/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

namespace hldpos {

const char *to_string(Algo a)
{
    switch (a) {
    case Algo::pow: return "pow";
    case Algo::dpos: return "dpos";
    case Algo::hldpos: return "hldpos";
    }
    return "unknown";
}

Algo parse_algo(std::string_view name)
{
    if (name == "pow") return Algo::pow;
    if (name == "dpos") return Algo::dpos;
    if (name == "hldpos") return Algo::hldpos;
    throw InputError("unknown algorithm '" + std::string(name) + "'");
}

double LatencyModel::sample_seconds(SeededRng &rng) const
{
    return median_ms * std::exp(sigma * rng.normal()) / 1000.0;
}

void SimConfig::validate() const
{
    auto fail = [](const std::string &m) { throw ValidationError("config: " + m); };
    if (scenario_id.empty()) fail("scenario_id must not be empty");
    if (!(minutes > 0.0)) fail("minutes must be positive");
    if (nodes < 2) fail("need at least two nodes");
    if (phi == 0) fail("phi must be positive");
    if (reps_per_group == 0) fail("reps_per_group must be positive");
    if (algo == Algo::hldpos && nodes < 2ull * phi * reps_per_group)
        fail("nodes must be at least 2 * phi * reps_per_group for hldpos");
    if (algo == Algo::dpos && dpos_witnesses == 0) fail("dpos_witnesses must be positive");
    if (!(rho >= 0.0)) fail("rho must be non-negative");
    if (!(window_lo >= 0.0 && window_lo < window_hi && window_hi <= 0.5)) fail("window must satisfy 0 <= lo < hi <= 0.5");
    if (epoch_rounds == 0) fail("epoch_rounds must be positive");
    if (!(tx_rate >= 0.0)) fail("tx_rate must be non-negative");
    if (!(pow_interval > 0.0)) fail("pow_interval must be positive");
    if (!(latency.median_ms > 0.0) || !(latency.sigma >= 0.0)) fail("latency parameters must be positive");
    if (base_balance < 0 || !(stake_mean >= 0.0)) fail("balances must be non-negative");
    try {
        engine.validate();
        adversary.validate();
    } catch (const ParameterError &e) {
        fail(e.what());
    }
    for (const auto &[node, b] : adversary.behaviors)
        if (node >= nodes) fail("adversary node " + std::to_string(node) + " does not exist");
}

// ---- config file -------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

template <class T> T parse_number(std::string_view key, std::string_view v)
{
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
        throw ValidationError("config: bad value '" + std::string(v) + "' for " + std::string(key));
    return out;
}

std::vector<std::string_view> split_list(std::string_view v)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= v.size(); ++i) {
        if (i == v.size() || v[i] == ',' || v[i] == ' ') {
            auto item = trim(v.substr(start, i - start));
            if (!item.empty()) out.push_back(item);
            start = i + 1;
        }
    }
    return out;
}

using Setter = std::function<void(SimConfig &, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>> &setters()
{
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        auto num = [](auto member) {
            return Setter([member](SimConfig &c, std::string_view k, std::string_view v) {
                using T = std::remove_reference_t<decltype(c.*member)>;
                c.*member = parse_number<T>(k, v);
            });
        };
        auto eng = [](auto member) {
            return Setter([member](SimConfig &c, std::string_view k, std::string_view v) {
                using T = std::remove_reference_t<decltype(c.engine.*member)>;
                c.engine.*member = parse_number<T>(k, v);
            });
        };
        t["scenario_id"] = [](SimConfig &c, std::string_view, std::string_view v) { c.scenario_id = v; };
        t["algo"] = [](SimConfig &c, std::string_view, std::string_view v) { c.algo = parse_algo(v); };
        t["nodes"] = num(&SimConfig::nodes);
        t["minutes"] = num(&SimConfig::minutes);
        t["seed"] = num(&SimConfig::seed);
        t["phi"] = num(&SimConfig::phi);
        t["reps_per_group"] = num(&SimConfig::reps_per_group);
        t["psi"] = [](SimConfig &c, std::string_view k, std::string_view v) {
            if (v == "auto") c.psi.reset();
            else c.psi = parse_number<unsigned>(k, v);
        };
        t["rho"] = num(&SimConfig::rho);
        t["window_lo"] = num(&SimConfig::window_lo);
        t["window_hi"] = num(&SimConfig::window_hi);
        t["epoch_rounds"] = num(&SimConfig::epoch_rounds);
        t["tx_rate"] = num(&SimConfig::tx_rate);
        t["dpos_witnesses"] = num(&SimConfig::dpos_witnesses);
        t["pow_interval"] = num(&SimConfig::pow_interval);
        t["base_balance"] = num(&SimConfig::base_balance);
        t["stake_mean"] = num(&SimConfig::stake_mean);
        t["latency_median_ms"] = [](SimConfig &c, std::string_view k, std::string_view v) {
            c.latency.median_ms = parse_number<double>(k, v);
        };
        t["latency_sigma"] = [](SimConfig &c, std::string_view k, std::string_view v) {
            c.latency.sigma = parse_number<double>(k, v);
        };
        t["token_R"] = eng(&EngineConfig::token_R);
        t["token_V"] = eng(&EngineConfig::token_V);
        t["PA"] = eng(&EngineConfig::PA);
        t["PV"] = eng(&EngineConfig::PV);
        t["slot_seconds"] = eng(&EngineConfig::slot_seconds);
        t["confirmation_depth"] = eng(&EngineConfig::confirmation_depth);
        t["block_capacity"] = eng(&EngineConfig::block_capacity);
        t["fork_extension"] = eng(&EngineConfig::fork_extension);
        t["adversary.behaviors"] = [](SimConfig &c, std::string_view k, std::string_view v) {
            c.adversary.behaviors.clear();
            for (auto item : split_list(v)) {
                auto colon = item.find(':');
                if (colon == std::string_view::npos)
                    throw ValidationError("config: expected node:behavior in " + std::string(k));
                NodeId node = parse_number<NodeId>(k, trim(item.substr(0, colon)));
                c.adversary.behaviors[node] = parse_behavior(trim(item.substr(colon + 1)));
            }
        };
        t["adversary.collusion"] = [](SimConfig &c, std::string_view k, std::string_view v) {
            c.adversary.collusion.clear();
            for (auto item : split_list(v))
                c.adversary.collusion.insert(parse_number<NodeId>(k, item));
        };
        t["adversary.rounds"] = [](SimConfig &c, std::string_view k, std::string_view v) {
            auto dash = v.find('-');
            if (dash == std::string_view::npos) throw ValidationError("config: expected first-last in " + std::string(k));
            c.adversary.first_round = parse_number<RoundId>(k, trim(v.substr(0, dash)));
            c.adversary.last_round = parse_number<RoundId>(k, trim(v.substr(dash + 1)));
        };
        return t;
    }();
    return table;
}

} // namespace

void set_config_value(SimConfig &config, std::string_view key, std::string_view value)
{
    auto it = setters().find(key);
    if (it == setters().end()) throw ValidationError("config: unknown key '" + std::string(key) + "'");
    try {
        it->second(config, key, value);
    } catch (const InputError &e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
}

SimConfig parse_config(std::string_view text, SimConfig config)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
        try {
            set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ValidationError &e) {
            std::string_view what = e.what();
            if (what.starts_with("config: ")) what.remove_prefix(8);
            throw ValidationError("config line " + std::to_string(line_no) + ": " + std::string(what));
        }
    }
    return config;
}

SimConfig load_config(const std::string &path, SimConfig base)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

// ---- scenario runner ---------------------------------------------------------

namespace {

enum class EventKind { pow_block = 0, slot = 1, tx = 2, minute = 3, checkpoint = 4 };

struct Event {
    double time;
    EventKind kind;
    std::uint64_t seq;
    bool operator>(const Event &o) const
    {
        if (time != o.time) return time > o.time;
        if (kind != o.kind) return kind > o.kind;
        return seq > o.seq;
    }
};

class EventQueue {
public:
    void push(double time, EventKind kind) { q_.push({time, kind, seq_++}); }
    bool empty() const { return q_.empty(); }
    Event pop()
    {
        Event e = q_.top();
        q_.pop();
        return e;
    }

private:
    std::priority_queue<Event, std::vector<Event>, std::greater<>> q_;
    std::uint64_t seq_ = 0;
};

struct EntryCounter {
    std::map<NodeId, std::uint32_t> counts;
    std::uint64_t once = 0, more = 0;
    void add(NodeId n)
    {
        auto &c = counts[n];
        ++c;
        if (c == 1) ++once;
        else if (c == 2) {
            --once;
            ++more;
        }
    }
};

Digest scenario_digest(std::uint64_t seed) { return HashInput{}.add("scenario").add_u64(seed).digest(); }

SeededRng stream(const Digest &seed, const char *tag) { return SeededRng(HashInput{}.add(tag).add(ByteView(seed)).digest()); }

} // namespace

MetricsRecord run_scenario(const SimConfig &config)
{
    config.validate();
    const double horizon = config.minutes * 60.0;
    const double slot = config.engine.slot_seconds;
    const Digest seed = scenario_digest(config.seed);

    MetricsRecord rec;
    rec.scenario_id = config.scenario_id;
    rec.algo = config.algo;
    rec.nodes = config.nodes;
    rec.minutes = config.minutes;
    rec.seed = config.seed;
    rec.psi = config.psi;

    EventQueue events;
    for (double m = 1; m * 60.0 <= horizon; ++m)
        events.push(m * 60.0, EventKind::minute);
    for (double m : checkpoint_minutes)
        if (m * 60.0 <= horizon) events.push(m * 60.0, EventKind::checkpoint);

    EntryCounter entries;
    std::uint64_t blocks = 0;

    // algorithm state
    std::unique_ptr<Vrf> vrf;
    std::unique_ptr<Engine> engine;
    std::vector<Tokens> stakes;
    std::vector<NodeId> dpos_list;
    std::size_t dpos_next = 0;
    std::uint64_t slot_index = 0;
    PowState pow;
    SeededRng pow_rng = stream(seed, "pow");
    SeededRng latency_rng = stream(seed, "latency");
    SeededRng tx_rng = stream(seed, "tx");
    std::uint64_t tx_nonce = 0;
    bool pow_stale = false;

    auto schedule_slot = [&] {
        double t = static_cast<double>(++slot_index) * slot;
        if (t <= horizon) events.push(t, EventKind::slot);
    };
    auto schedule_pow = [&] {
        BlockEvent ev = pow_baseline_tick({config.pow_interval}, pow, pow_rng, config.nodes,
                                          config.latency.sample_seconds(latency_rng));
        pow_stale = ev.stale;
        if (ev.time <= horizon) events.push(ev.time, EventKind::pow_block);
    };
    auto close_round = [&] {
        RoundReport r = engine->finish_round();
        rec.forks_built += r.forks_built;
        rec.forks_detected += r.forks_detected;
        rec.forks_adopted += r.forks_adopted;
    };
    auto open_round = [&] {
        if (config.algo == Algo::hldpos) {
            engine->begin_round();
            ++rec.rounds;
            for (const auto &w : engine->witnesses().entries)
                entries.add(w.node);
        } else {
            dpos_list = dpos_elect(stakes, config.dpos_witnesses);
            dpos_next = 0;
            ++rec.rounds;
            for (NodeId n : dpos_list)
                entries.add(n);
        }
    };

    switch (config.algo) {
    case Algo::pow:
        stakes = initial_balances(config.nodes, seed, config.base_balance, config.stake_mean);
        break;
    case Algo::dpos:
        stakes = initial_balances(config.nodes, seed, config.base_balance, config.stake_mean);
        open_round();
        schedule_slot();
        break;
    case Algo::hldpos: {
        vrf = std::make_unique<Vrf>(CurveParams::p256());
        ElectionConfig ec;
        ec.window = Window{config.window_lo, config.window_hi};
        ec.pairs_per_group = config.reps_per_group;
        ec.rho = config.rho;
        ec.fixed_psi = config.psi;
        engine = std::make_unique<Engine>(config.engine, ec, config.adversary, *vrf,
                                          make_nodes(*vrf, config.nodes, seed, config.base_balance, config.stake_mean),
                                          config.phi, seed, config.epoch_rounds);
        open_round();
        schedule_slot();
        if (config.tx_rate > 0.0) {
            double t = tx_rng.exponential(1.0 / config.tx_rate);
            if (t <= horizon) events.push(t, EventKind::tx);
        }
        break;
    }
    }
    if (config.algo == Algo::pow) schedule_pow();

    while (!events.empty()) {
        Event ev = events.pop();
        switch (ev.kind) {
        case EventKind::minute:
            rec.blocks_per_minute.push_back(blocks);
            break;
        case EventKind::checkpoint:
            rec.checkpoints.push_back({ev.time / 60.0, blocks, entries.once,
                                       entries.more});
            break;
        case EventKind::pow_block:
            if (pow_stale) ++rec.stale_blocks;
            else ++blocks;
            schedule_pow();
            break;
        case EventKind::tx: {
            NodeId sender = static_cast<NodeId>(tx_rng.index(config.nodes));
            NodeId receiver = static_cast<NodeId>((sender + 1 + tx_rng.index(config.nodes - 1)) % config.nodes);
            Tokens amount = 1 + static_cast<Tokens>(tx_rng.index(10));
            engine->submit(Transaction::make(sender, receiver, amount, engine->round(), tx_nonce++));
            double t = ev.time + tx_rng.exponential(1.0 / config.tx_rate);
            if (t <= horizon) events.push(t, EventKind::tx);
            break;
        }
        case EventKind::slot:
            if (config.algo == Algo::dpos) {
                ++blocks;
                if (++dpos_next == dpos_list.size() && ev.time < horizon) open_round();
            } else {
                for (;;) {
                    auto r = engine->step();
                    if (!r) {
                        close_round();
                        open_round();
                        continue;
                    }
                    if (r->slot_used) break;
                }
                blocks = engine->chain().tip_height();
                if (!engine->has_pending()) {
                    close_round();
                    blocks = engine->chain().tip_height();
                    if (ev.time < horizon) open_round();
                }
            }
            schedule_slot();
            break;
        }
    }

    rec.blocks = blocks;
    rec.witness_entries = std::move(entries.counts);
    rec.witness_once = entries.once;
    rec.witness_more = entries.more;
    if (engine) {
        for (const auto &n : engine->nodes())
            rec.final_balances[n.id] = engine->accounts().balance(n.id);
    } else {
        for (std::size_t i = 0; i < stakes.size(); ++i)
            rec.final_balances[static_cast<NodeId>(i)] = stakes[i];
    }
    return rec;
}

// ---- sweeps ------------------------------------------------------------------

std::vector<MetricsRecord> sweep_psi(const SimConfig &base, const std::vector<unsigned> &psi_values)
{
    std::set<unsigned> seen;
    for (unsigned v : psi_values)
        if (!seen.insert(v).second) throw InputError("psi value " + std::to_string(v) + " repeated");
    std::vector<MetricsRecord> out;
    for (unsigned v : psi_values) {
        SimConfig c = base;
        c.psi = v;
        c.scenario_id = base.scenario_id + "-psi" + std::to_string(v);
        out.push_back(run_scenario(c));
    }
    return out;
}

namespace {

std::string format_number(double v)
{
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    return nlohmann::json(v).dump();
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string psi_table_csv(const std::vector<MetricsRecord> &records)
{
    std::string out = "psi,minute,blocks,witness_once,witness_more\n";
    for (const auto &r : records)
        for (const auto &c : r.checkpoints)
            out += (r.psi ? std::to_string(*r.psi) : "auto") + "," + format_number(c.minute) + "," +
                   std::to_string(c.blocks) + "," + std::to_string(c.witness_once) + "," +
                   std::to_string(c.witness_more) + "\n";
    return out;
}

std::vector<MetricsRecord> sweep_matrix(const SimConfig &base, const std::vector<Algo> &algos,
                                        const std::vector<std::size_t> &node_counts,
                                        const std::vector<double> &durations)
{
    std::vector<MetricsRecord> out;
    for (Algo a : algos)
        for (std::size_t n : node_counts)
            for (double m : durations) {
                SimConfig c = base;
                c.algo = a;
                c.nodes = n;
                c.minutes = m;
                c.scenario_id = base.scenario_id + "-" + to_string(a) + "-n" + std::to_string(n) + "-m" + format_number(m);
                out.push_back(run_scenario(c));
            }
    return out;
}

// ---- export ------------------------------------------------------------------

std::string csv_header()
{
    return "scenario_id,algo,nodes,minutes,seed,psi,blocks,witness_once,witness_more,forks_built,forks_detected,"
           "forks_adopted\n";
}

std::string csv_row(const MetricsRecord &r)
{
    return csv_field(r.scenario_id) + "," + to_string(r.algo) + "," + std::to_string(r.nodes) + "," +
           format_number(r.minutes) + "," + std::to_string(r.seed) + "," + (r.psi ? std::to_string(*r.psi) : "auto") +
           "," + std::to_string(r.blocks) + "," + std::to_string(r.witness_once) + "," + std::to_string(r.witness_more) +
           "," + std::to_string(r.forks_built) + "," + std::to_string(r.forks_detected) + "," +
           std::to_string(r.forks_adopted) + "\n";
}

std::string to_csv(const std::vector<MetricsRecord> &records)
{
    std::string out = csv_header();
    for (const auto &r : records)
        out += csv_row(r);
    return out;
}

nlohmann::json to_json(const MetricsRecord &r)
{
    using nlohmann::json;
    json checkpoints = json::array();
    for (const auto &c : r.checkpoints)
        checkpoints.push_back(
            {{"minute", c.minute}, {"blocks", c.blocks}, {"witness_once", c.witness_once}, {"witness_more", c.witness_more}});
    json entries = json::array();
    for (const auto &[node, count] : r.witness_entries)
        entries.push_back({{"node", node}, {"count", count}});
    json balances = json::array();
    for (const auto &[node, balance] : r.final_balances)
        balances.push_back({{"node", node}, {"balance", balance}});
    return json{{"scenario_id", r.scenario_id},
                {"algo", to_string(r.algo)},
                {"nodes", r.nodes},
                {"minutes", r.minutes},
                {"seed", r.seed},
                {"psi", r.psi ? json(*r.psi) : json(nullptr)},
                {"blocks", r.blocks},
                {"stale_blocks", r.stale_blocks},
                {"rounds", r.rounds},
                {"blocks_per_minute", r.blocks_per_minute},
                {"checkpoints", checkpoints},
                {"witness_entries", entries},
                {"witness_once", r.witness_once},
                {"witness_more", r.witness_more},
                {"forks_built", r.forks_built},
                {"forks_detected", r.forks_detected},
                {"forks_adopted", r.forks_adopted},
                {"final_balances", balances}};
}

MetricsRecord record_from_json(const nlohmann::json &j)
{
    try {
        MetricsRecord r;
        r.scenario_id = j.at("scenario_id").get<std::string>();
        r.algo = parse_algo(j.at("algo").get<std::string>());
        r.nodes = j.at("nodes").get<std::size_t>();
        r.minutes = j.at("minutes").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        if (!j.at("psi").is_null()) r.psi = j.at("psi").get<unsigned>();
        r.blocks = j.at("blocks").get<std::uint64_t>();
        r.stale_blocks = j.at("stale_blocks").get<std::uint64_t>();
        r.rounds = j.at("rounds").get<std::uint64_t>();
        r.blocks_per_minute = j.at("blocks_per_minute").get<std::vector<std::uint64_t>>();
        for (const auto &c : j.at("checkpoints"))
            r.checkpoints.push_back({c.at("minute").get<double>(), c.at("blocks").get<std::uint64_t>(),
                                     c.at("witness_once").get<std::uint64_t>(), c.at("witness_more").get<std::uint64_t>()});
        for (const auto &e : j.at("witness_entries"))
            r.witness_entries[e.at("node").get<NodeId>()] = e.at("count").get<std::uint32_t>();
        r.witness_once = j.at("witness_once").get<std::uint64_t>();
        r.witness_more = j.at("witness_more").get<std::uint64_t>();
        r.forks_built = j.at("forks_built").get<std::uint64_t>();
        r.forks_detected = j.at("forks_detected").get<std::uint64_t>();
        r.forks_adopted = j.at("forks_adopted").get<std::uint64_t>();
        for (const auto &b : j.at("final_balances"))
            r.final_balances[b.at("node").get<NodeId>()] = b.at("balance").get<Tokens>();
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw InputError(std::string("metrics record: ") + e.what());
    }
}

void write_text(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path);
}

void export_csv(const std::vector<MetricsRecord> &records, const std::string &path) { write_text(path, to_csv(records)); }

void export_json(const std::vector<MetricsRecord> &records, const std::string &path)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : records)
        arr.push_back(to_json(r));
    write_text(path, arr.dump(2) + "\n");
}

} // namespace hldpos
