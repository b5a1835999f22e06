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
#include "hldpos/baselines.hpp"

#include "hldpos/error.hpp"

#include <algorithm>
#include <numeric>

namespace hldpos {

std::vector<NodeId> dpos_elect(std::span<const Tokens> stake, unsigned count)
{
    std::vector<NodeId> ids(stake.size());
    std::iota(ids.begin(), ids.end(), NodeId{0});
    auto take = std::min<std::size_t>(count, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(),
                      [&](NodeId a, NodeId b) { return stake[a] != stake[b] ? stake[a] > stake[b] : a < b; });
    ids.resize(take);
    return ids;
}

std::vector<BlockEvent> dpos_baseline_round(const DposConfig &config, std::span<const NodeId> witnesses, double start,
                                            double horizon)
{
    if (!(config.slot_seconds > 0.0)) throw ParameterError("slot time must be positive");
    std::vector<BlockEvent> out;
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
        double t = start + static_cast<double>(i + 1) * config.slot_seconds;
        if (t > horizon) break;
        out.push_back({t, witnesses[i], false});
    }
    return out;
}

BlockEvent pow_baseline_tick(const PowConfig &config, PowState &state, SeededRng &rng, std::size_t miners, double delay)
{
    if (!(config.mean_interval > 0.0)) throw ParameterError("PoW mean interval must be positive");
    if (miners == 0) throw InputError("PoW needs at least one miner");
    state.clock += rng.exponential(config.mean_interval);
    BlockEvent ev{state.clock, static_cast<NodeId>(rng.index(miners)), false};
    if (state.clock - state.last_block < state.last_delay) {
        ev.stale = true;
    } else {
        state.last_block = state.clock;
        state.last_delay = delay;
    }
    return ev;
}

} // namespace hldpos
