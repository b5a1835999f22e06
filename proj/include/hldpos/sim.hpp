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
#include "hldpos/engine.hpp"
#include "hldpos/rng.hpp"
#include "hldpos/types.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hldpos {

enum class Algo { pow, dpos, hldpos };
const char *to_string(Algo a);
/// Throws InputError for an unknown name.
Algo parse_algo(std::string_view name);

/// Per-broadcast delay, lognormal around the median.
struct LatencyModel {
    double median_ms = 100.0;
    double sigma = 0.5;
    double sample_seconds(SeededRng &rng) const;
};

struct SimConfig {
    std::string scenario_id = "scenario";
    Algo algo = Algo::hldpos;
    std::size_t nodes = 500;
    double minutes = 60.0;
    std::uint64_t seed = 1;
    unsigned phi = 10;
    unsigned reps_per_group = 1; ///< voted/random pairs per group
    std::optional<unsigned> psi; ///< fixed cooldown; derived from rho when unset
    double rho = 0.2;
    double window_lo = 0.0;
    double window_hi = 0.5;
    unsigned epoch_rounds = 1;
    EngineConfig engine;
    AdversarySpec adversary;
    LatencyModel latency;
    double tx_rate = 1.0; ///< transactions per second into the shared pool
    unsigned dpos_witnesses = 101;
    double pow_interval = 600.0;
    Tokens base_balance = 1000;
    double stake_mean = 1000.0;

    /// Throws ValidationError describing the first violated constraint.
    void validate() const;
};

/// Flat `key = value` lines; `#` starts a comment. Throws ValidationError
/// naming the line for unknown keys or malformed values.
SimConfig parse_config(std::string_view text, SimConfig base = {});
SimConfig load_config(const std::string &path, SimConfig base = {});
/// Applies one key; same errors as parse_config.
void set_config_value(SimConfig &config, std::string_view key, std::string_view value);

struct Checkpoint {
    double minute = 0.0;
    std::uint64_t blocks = 0;
    std::uint64_t witness_once = 0;
    std::uint64_t witness_more = 0;
    bool operator==(const Checkpoint &) const = default;
};

struct MetricsRecord {
    std::string scenario_id;
    Algo algo = Algo::hldpos;
    std::size_t nodes = 0;
    double minutes = 0.0;
    std::uint64_t seed = 0;
    std::optional<unsigned> psi;
    std::uint64_t blocks = 0;
    std::uint64_t stale_blocks = 0;
    std::uint64_t rounds = 0; ///< rounds started
    /// Cumulative block count at the end of each simulated minute.
    std::vector<std::uint64_t> blocks_per_minute;
    std::vector<Checkpoint> checkpoints;
    std::map<NodeId, std::uint32_t> witness_entries;
    std::uint64_t witness_once = 0;
    std::uint64_t witness_more = 0;
    std::uint64_t forks_built = 0;
    std::uint64_t forks_detected = 0;
    std::uint64_t forks_adopted = 0;
    std::map<NodeId, Tokens> final_balances;

    bool operator==(const MetricsRecord &) const = default;
};

/// Minutes at which checkpoints are taken when within the run.
inline constexpr double checkpoint_minutes[] = {10, 20, 30, 40, 50, 60};

MetricsRecord run_scenario(const SimConfig &config);

/// One run per psi value on the same seed. Throws InputError on repeats.
std::vector<MetricsRecord> sweep_psi(const SimConfig &base, const std::vector<unsigned> &psi_values);
/// Rows (psi, minute, once, more) over every checkpoint.
std::string psi_table_csv(const std::vector<MetricsRecord> &records);

std::vector<MetricsRecord> sweep_matrix(const SimConfig &base, const std::vector<Algo> &algos,
                                        const std::vector<std::size_t> &node_counts,
                                        const std::vector<double> &durations);

std::string csv_header();
std::string csv_row(const MetricsRecord &record);
std::string to_csv(const std::vector<MetricsRecord> &records);

nlohmann::json to_json(const MetricsRecord &record);
/// Throws InputError on missing or mistyped fields.
MetricsRecord record_from_json(const nlohmann::json &j);

/// Throw IoError naming the path when it cannot be written.
void export_csv(const std::vector<MetricsRecord> &records, const std::string &path);
void export_json(const std::vector<MetricsRecord> &records, const std::string &path);
void write_text(const std::string &path, const std::string &text);

} // namespace hldpos
