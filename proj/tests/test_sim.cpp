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

#include "hldpos/baselines.hpp"
#include "hldpos/error.hpp"
#include "hldpos/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hldpos;

namespace {

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SimConfig small(Algo algo, double minutes = 10)
{
    SimConfig c;
    c.algo = algo;
    c.nodes = 300;
    c.minutes = minutes;
    c.seed = 5;
    return c;
}

} // namespace

TEST_CASE("config parsing")
{
    auto c = parse_config(R"(# reproduction settings
scenario_id = repro
algo = dpos
nodes = 2000
minutes = 20   # short run
psi = 3
reps_per_group = 6
PA = 70
latency_median_ms = 80
adversary.behaviors = 4:hide_own_tx_fork, 9:collude_silent
adversary.collusion = 4, 9
adversary.rounds = 2-40
)");
    CHECK(c.scenario_id == "repro");
    CHECK(c.algo == Algo::dpos);
    CHECK(c.nodes == 2000);
    CHECK(c.minutes == 20.0);
    CHECK(c.psi == 3u);
    CHECK(c.reps_per_group == 6);
    CHECK(c.engine.PA == 70);
    CHECK(c.latency.median_ms == 80.0);
    CHECK(c.adversary.behaviors.at(4) == Behavior::hide_own_tx_fork);
    CHECK(c.adversary.collusion == std::set<NodeId>{4, 9});
    CHECK(c.adversary.first_round == 2);
    CHECK(c.adversary.last_round == 40);
    CHECK_NOTHROW(c.validate());
    CHECK_FALSE(parse_config("psi = auto", c).psi);

    SimConfig d;
    set_config_value(d, "nodes", "1000");
    CHECK(d.nodes == 1000);
}

TEST_CASE("config errors name the line")
{
    auto message = [](std::string_view text) {
        try {
            parse_config(text);
        } catch (const ValidationError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("nodes = 10\nblocksize = 4\n").find("line 2") != std::string::npos);
    CHECK(message("nodes = 10\nblocksize = 4\n").find("blocksize") != std::string::npos);
    CHECK(message("nodes = ten").find("line 1") != std::string::npos);
    CHECK(message("just words").find("line 1") != std::string::npos);
    CHECK(message("algo = raft").find("line 1") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/dir/x.conf"), IoError);
}

TEST_CASE("config validation")
{
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    c.nodes = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.minutes = -1;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.window_hi = 0.7;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("DPoS baseline")
{
    std::vector<Tokens> stake{5, 9, 9, 1, 7};
    CHECK(dpos_elect(stake, 3) == std::vector<NodeId>{1, 2, 4});
    std::vector<NodeId> w(101);
    for (NodeId i = 0; i < 101; ++i)
        w[i] = i;
    auto events = dpos_baseline_round(DposConfig{}, w, 0.0, 600.0);
    CHECK(events.size() == 48); // floor(600 / 12.42)
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(events[i].producer == w[i]);
        CHECK(events[i].time == doctest::Approx(12.42 * static_cast<double>(i + 1)));
    }
    CHECK(dpos_baseline_round(DposConfig{}, w, 0.0).size() == 101);
}

TEST_CASE("PoW baseline arrivals")
{
    std::vector<std::size_t> counts;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SeededRng rng(seed);
        PowState state;
        std::size_t n = 0;
        for (;;) {
            auto ev = pow_baseline_tick(PowConfig{}, state, rng, 50, 0.1);
            if (ev.time > 600.0) break;
            CHECK(ev.producer < 50);
            ++n;
        }
        counts.push_back(n);
    }
    std::sort(counts.begin(), counts.end());
    CHECK(counts[49] <= 1); // Poisson(1) median
    CHECK(counts[50] <= 1);
    CHECK(counts.back() <= 6);

    SeededRng rng(77);
    PowState state;
    double t = 0;
    for (int i = 0; i < 20000; ++i)
        t = pow_baseline_tick(PowConfig{}, state, rng, 10, 0.0).time;
    CHECK(t / 20000 == doctest::Approx(600).epsilon(0.03));
}

TEST_CASE("HL-DPoS and DPoS block counts follow the slot clock")
{
    for (auto algo : {Algo::hldpos, Algo::dpos}) {
        auto r = run_scenario(small(algo));
        CAPTURE(to_string(algo));
        CHECK(r.blocks == 48);
        REQUIRE(r.blocks_per_minute.size() == 10);
        CHECK(r.blocks_per_minute[0] == 4);
        CHECK(r.blocks_per_minute.back() == 48);
        REQUIRE(r.checkpoints.size() == 1);
        CHECK(r.checkpoints[0].blocks == 48);
    }
}

TEST_CASE("reruns are identical")
{
    for (auto algo : {Algo::hldpos, Algo::dpos, Algo::pow}) {
        auto c = small(algo, 20);
        auto a = run_scenario(c);
        auto b = run_scenario(c);
        CHECK(a == b);
        CHECK(to_csv({a}) == to_csv({b}));
        CHECK(to_json(a).dump() == to_json(b).dump());
        c.seed = 6;
        if (algo != Algo::dpos) CHECK_FALSE(run_scenario(c) == a);
    }
}

TEST_CASE("CSV output")
{
    CHECK(to_csv({}) == csv_header());
    auto r = run_scenario(small(Algo::hldpos));
    auto csv = to_csv({r});
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.rfind("scenario,hldpos,300,10,5,auto,48,", csv_header().size()) == csv_header().size());
    r.scenario_id = "a,b";
    CHECK(csv_row(r).rfind("\"a,b\",", 0) == 0);
}

TEST_CASE("JSON round trip")
{
    auto c = small(Algo::hldpos);
    c.adversary.behaviors = {{3, Behavior::hide_own_tx_fork}};
    c.psi = 2;
    auto r = run_scenario(c);
    auto back = record_from_json(nlohmann::json::parse(to_json(r).dump()));
    CHECK(back == r);
    auto j = to_json(r);
    j.erase("blocks");
    CHECK_THROWS_AS(record_from_json(j), InputError);
}

TEST_CASE("exports")
{
    auto dir = std::filesystem::temp_directory_path() / "hldpos-test-sim";
    std::filesystem::create_directories(dir);
    auto r = run_scenario(small(Algo::dpos));
    export_csv({r}, (dir / "m.csv").string());
    export_json({r}, (dir / "m.json").string());
    CHECK(slurp(dir / "m.csv") == to_csv({r}));
    auto arr = nlohmann::json::parse(slurp(dir / "m.json"));
    REQUIRE(arr.is_array());
    CHECK(record_from_json(arr[0]) == r);
    CHECK_THROWS_AS(export_csv({r}, (dir / "missing" / "m.csv").string()), IoError);
    CHECK_THROWS_AS(write_text("/proc/hldpos-denied", "x"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("psi sweep")
{
    auto base = small(Algo::hldpos, 30);
    base.reps_per_group = 3;
    auto records = sweep_psi(base, {0, 1, 2});
    REQUIRE(records.size() == 3);
    for (unsigned i = 0; i < 3; ++i)
        CHECK(records[i].psi == i);
    CHECK(records[0].blocks == records[2].blocks);
    auto table = psi_table_csv(records);
    CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 3 * 3);
    CHECK_THROWS_AS(sweep_psi(base, {1, 1}), InputError);
}

TEST_CASE("sweep matrix")
{
    auto base = small(Algo::hldpos);
    auto rows = sweep_matrix(base, {Algo::hldpos, Algo::dpos}, {200, 400}, {5, 10});
    REQUIRE(rows.size() == 8);
    for (const auto &r : rows)
        CHECK(r.blocks == static_cast<std::uint64_t>(std::floor(r.minutes * 60 / 12.42)));
}

TEST_CASE("attacker scenario keeps the canonical chain")
{
    auto c = small(Algo::hldpos, 20);
    c.adversary.behaviors = {{7, Behavior::hide_own_tx_fork}};
    auto r = run_scenario(c);
    CHECK(r.forks_built == r.forks_detected);
    CHECK(r.forks_adopted == 0);
    CHECK(r.forks_built > 0);
}
