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

#include "hldpos/rng.hpp"
#include "hldpos/types.hpp"

#include <limits>
#include <span>
#include <vector>

namespace hldpos {

struct BlockEvent {
    double time = 0.0; ///< seconds
    NodeId producer = 0;
    bool stale = false;
};

struct DposConfig {
    unsigned witnesses = 101;
    double slot_seconds = 12.42;
};

/// Top `count` nodes by stake (ties to the lower id), in packing order.
std::vector<NodeId> dpos_elect(std::span<const Tokens> stake, unsigned count);

/// One DPoS round starting at `start`: each elected witness produces one
/// block, at start + i * slot for i = 1..|witnesses|. Blocks past `horizon`
/// are dropped.
std::vector<BlockEvent> dpos_baseline_round(const DposConfig &config, std::span<const NodeId> witnesses, double start,
                                            double horizon = std::numeric_limits<double>::infinity());

struct PowConfig {
    double mean_interval = 600.0;
};

struct PowState {
    double clock = 0.0;
    double last_block = -std::numeric_limits<double>::infinity();
    double last_delay = 0.0;
};

/// Next PoW block: exponential inter-arrival with the configured mean and a
/// uniformly drawn miner. A block found before the previous one finished
/// propagating (within `delay` seconds of it) is stale.
BlockEvent pow_baseline_tick(const PowConfig &config, PowState &state, SeededRng &rng, std::size_t miners, double delay);

} // namespace hldpos
