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

#include <cmath>
#include <cstdint>
#include <random>

namespace hldpos {

/// Deterministic PRNG stream. The distributions are written out here instead
/// of using <random>'s, whose output is implementation-defined, so a seed
/// reproduces the same sequence with any standard library.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
    explicit SeededRng(const Digest &seed) : engine_(digest_prefix_u64(seed)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0,1) with 53 bits of resolution.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// floor(unit() * n), so always < n for n > 0.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

    double exponential(double mean) { return -mean * std::log1p(-unit()); }

    /// Standard normal via Box-Muller; one draw per call.
    double normal()
    {
        double u1 = 1.0 - unit(); // (0,1]
        double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace hldpos
