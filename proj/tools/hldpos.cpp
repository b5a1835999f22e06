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
#include "hldpos/error.hpp"
#include "hldpos/payoff.hpp"
#include "hldpos/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace hldpos;

// Prints the single machine-readable failure line and returns the exit code.
int fail(const std::string &code, const std::string &message, int status)
{
    std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << "\n";
    return status;
}

struct SimOptions {
    std::string config;
    std::optional<std::string> algo;
    std::optional<std::size_t> nodes;
    std::optional<double> minutes;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> psi;
    std::string out;
};

void add_sim_options(CLI::App *cmd, SimOptions &o)
{
    cmd->add_option("--config", o.config, "scenario config file (key = value)");
    cmd->add_option("--algo", o.algo, "pow | dpos | hldpos");
    cmd->add_option("--nodes", o.nodes, "node count");
    cmd->add_option("--minutes", o.minutes, "simulated minutes");
    cmd->add_option("--seed", o.seed, "scenario seed");
    cmd->add_option("--psi", o.psi, "fixed cooldown, or auto");
    cmd->add_option("--out", o.out, "output directory; stdout when omitted");
}

SimConfig resolve(const SimOptions &o)
{
    SimConfig c = o.config.empty() ? SimConfig{} : load_config(o.config);
    if (o.algo) c.algo = parse_algo(*o.algo);
    if (o.nodes) c.nodes = *o.nodes;
    if (o.minutes) c.minutes = *o.minutes;
    if (o.seed) c.seed = *o.seed;
    if (o.psi) set_config_value(c, "psi", *o.psi);
    c.validate();
    return c;
}

void emit(const SimOptions &o, const std::string &stem, const std::vector<MetricsRecord> &records,
          const std::string *extra_csv = nullptr)
{
    if (o.out.empty()) {
        std::cout << (extra_csv ? *extra_csv : to_csv(records));
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (ec) throw IoError("cannot create output directory " + o.out + ": " + ec.message());
    const std::string base = (std::filesystem::path(o.out) / stem).string();
    export_csv(records, base + ".csv");
    export_json(records, base + ".json");
    if (extra_csv) write_text(base + "-psi.csv", *extra_csv);
    std::cout << base << ".csv\n" << base << ".json\n";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"HL-DPoS consensus simulator"};
    app.require_subcommand(1);

    auto *sim = app.add_subcommand("sim", "run simulations");
    sim->require_subcommand(1);

    SimOptions run_opts;
    auto *run = sim->add_subcommand("run", "run one scenario");
    add_sim_options(run, run_opts);

    SimOptions psi_opts;
    std::vector<unsigned> psi_values{0, 1, 2, 3, 4, 5};
    auto *sweep_psi_cmd = sim->add_subcommand("sweep-psi", "one run per cooldown value");
    add_sim_options(sweep_psi_cmd, psi_opts);
    sweep_psi_cmd->add_option("--values", psi_values, "cooldown values")->delimiter(',');

    SimOptions matrix_opts;
    std::vector<std::string> algos{"pow", "dpos", "hldpos"};
    std::vector<std::size_t> node_counts{500, 1000, 2000, 3000, 4000, 5000};
    std::vector<double> durations{10, 20, 30, 40, 50, 60};
    auto *matrix = sim->add_subcommand("sweep-matrix", "algorithms x node counts x durations");
    add_sim_options(matrix, matrix_opts);
    matrix->add_option("--algos", algos, "algorithms")->delimiter(',');
    matrix->add_option("--node-counts", node_counts, "node counts")->delimiter(',');
    matrix->add_option("--durations", durations, "durations in minutes")->delimiter(',');

    auto *payoff = app.add_subcommand("payoff", "payoff analysis");
    payoff->require_subcommand(1);
    auto *grid = payoff->add_subcommand("grid", "equilibrium margins over a (P1, P2, rho) grid");
    std::vector<double> p1s{1, 10, 100}, p2s{1, 10};
    std::vector<unsigned> rhos{1, 2, 5, 10};
    unsigned kappa = 20, lambda1 = 1, lambda2 = 1;
    double pb = 0.5;
    grid->add_option("--p1", p1s, "P1 values")->delimiter(',');
    grid->add_option("--p2", p2s, "P2 values")->delimiter(',');
    grid->add_option("--rho", rhos, "rho values")->delimiter(',');
    grid->add_option("--kappa", kappa, "witness count");
    grid->add_option("--lambda1", lambda1, "lambda1");
    grid->add_option("--lambda2", lambda2, "lambda2");
    grid->add_option("--pb", pb, "probability every position behaves normally");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail("usage", e.what(), 2);
    }

    try {
        if (run->parsed()) {
            SimConfig c = resolve(run_opts);
            emit(run_opts, c.scenario_id, {run_scenario(c)});
        } else if (sweep_psi_cmd->parsed()) {
            SimConfig c = resolve(psi_opts);
            auto records = sweep_psi(c, psi_values);
            std::string table = psi_table_csv(records);
            emit(psi_opts, c.scenario_id + "-sweep-psi", records, &table);
        } else if (matrix->parsed()) {
            SimConfig c = resolve(matrix_opts);
            std::vector<Algo> parsed;
            for (const auto &a : algos)
                parsed.push_back(parse_algo(a));
            emit(matrix_opts, c.scenario_id + "-sweep-matrix", sweep_matrix(c, parsed, node_counts, durations));
        } else if (grid->parsed()) {
            std::ostringstream out;
            out << "P1,P2,rho,kappa,lambda1,lambda2,pb,E_normal,min_margin\n";
            out.precision(17);
            for (double p1 : p1s)
                for (double p2 : p2s)
                    for (unsigned rho : rhos) {
                        PayoffParams params{p1, p2, rho, kappa, lambda1, lambda2};
                        params.validate();
                        BehaviorProfile profile(kappa, pb);
                        out << p1 << "," << p2 << "," << rho << "," << kappa << "," << lambda1 << "," << lambda2 << ","
                            << pb << "," << expected_profit_after_normal(params) << ","
                            << equilibrium_margin(params, profile) << "\n";
                    }
            std::cout << out.str();
        }
    } catch (const ValidationError &e) {
        return fail("validation", e.what(), 3);
    } catch (const ParameterError &e) {
        return fail("parameter", e.what(), 3);
    } catch (const InputError &e) {
        return fail("input", e.what(), 3);
    } catch (const IoError &e) {
        return fail("io", e.what(), 4);
    } catch (const std::exception &e) {
        return fail("internal", e.what(), 1);
    }
    return 0;
}
