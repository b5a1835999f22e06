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
#include "hldpos/payoff.hpp"

#include "hldpos/error.hpp"
#include "hldpos/rng.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace hldpos {

namespace {

// product of Pb^N (normal) or Pb^M over positions [from, to], 1-based, empty = 1
double prod(std::span<const double> pb, long from, long to, bool normal)
{
    double p = 1.0;
    for (long i = from; i <= to; ++i)
        p *= normal ? pb[static_cast<std::size_t>(i - 1)] : 1.0 - pb[static_cast<std::size_t>(i - 1)];
    return p;
}

} // namespace

void PayoffParams::validate() const
{
    if (rho < 1) throw ParameterError("rho must be at least 1");
    if (kappa < 2) throw ParameterError("kappa must be at least 2");
    if (lambda1 >= kappa) throw ParameterError("lambda1 must be below kappa");
    if (lambda2 == 0 || lambda2 >= kappa) throw ParameterError("lambda2 must lie in (0, kappa)");
}

void validate_profile(const PayoffParams &params, std::span<const double> profile)
{
    if (profile.size() != params.kappa)
        throw InputError("profile has " + std::to_string(profile.size()) + " entries, expected " +
                         std::to_string(params.kappa));
    for (double p : profile)
        if (!(p >= 0.0 && p <= 1.0)) throw InputError("profile entries must lie in [0, 1]");
}

double outcome_payoff(const PayoffParams &params, const std::vector<bool> &outcome, unsigned w)
{
    const long W = w, K = params.kappa, l1 = params.lambda1, l2 = params.lambda2;
    auto all = [&](long from, long to, bool normal) {
        for (long i = from; i <= to; ++i)
            if (outcome[static_cast<std::size_t>(i - 1)] != normal) return false;
        return true;
    };
    const double rp2 = static_cast<double>(params.rho) * params.P2;
    if (all(1, W, true)) return params.P1;
    if (l1 >= 1 && l1 < W && all(1, W - l1 - 1, true) && all(W - l1, W - 1, false) && outcome[W - 1])
        return static_cast<double>(l1) * rp2 + params.P1;
    if (W + l2 <= K && all(W, W + l2 - 1, false) && outcome[W + l2 - 1]) return -rp2;
    if (all(1, K, false)) return params.P2;
    return 0.0;
}

double expected_profit(const PayoffParams &params, std::span<const double> pb, unsigned w)
{
    params.validate();
    validate_profile(params, pb);
    if (w < 1 || w > params.kappa)
        throw InputError("position " + std::to_string(w) + " outside [1, " + std::to_string(params.kappa) + "]");
    const long W = w, K = params.kappa, l1 = params.lambda1, l2 = params.lambda2;
    const double rp2 = static_cast<double>(params.rho) * params.P2;

    double e = prod(pb, 1, W, true) * params.P1;
    if (l1 >= 1 && l1 < W)
        e += prod(pb, 1, W - l1 - 1, true) * prod(pb, W - l1, W - 1, false) * pb[W - 1] *
             (static_cast<double>(l1) * rp2 + params.P1);
    if (W + l2 <= K) e += prod(pb, W, W + l2 - 1, false) * pb[W + l2 - 1] * -rp2;
    e += prod(pb, 1, K, false) * params.P2;
    return e;
}

double expected_profit_after_malicious(const PayoffParams &params, std::span<const double> pb, unsigned w)
{
    params.validate();
    validate_profile(params, pb);
    if (w + 1 > params.kappa)
        throw InputError("position " + std::to_string(w + 1) + " exceeds kappa " + std::to_string(params.kappa));
    const long q = w + 1, K = params.kappa, l2 = params.lambda2;
    const double rp2 = static_cast<double>(params.rho) * params.P2;
    double e = 0.0;
    if (q + l2 <= K) e += prod(pb, q + 1, q + l2 - 1, false) * pb[q + l2 - 1] * -rp2;
    e += prod(pb, q + 1, K, false) * params.P2;
    return e;
}

double expected_profit_after_normal(const PayoffParams &params)
{
    return static_cast<double>(params.lambda1) * static_cast<double>(params.rho) * params.P2 + params.P1;
}

double equilibrium_margin(const PayoffParams &params, std::span<const double> profile, unsigned w)
{
    return expected_profit_after_normal(params) - expected_profit_after_malicious(params, profile, w);
}

double equilibrium_margin(const PayoffParams &params, std::span<const double> profile)
{
    double m = std::numeric_limits<double>::infinity();
    for (unsigned w = 0; w < params.kappa; ++w)
        m = std::min(m, equilibrium_margin(params, profile, w));
    return m;
}

double report_bounty(const PayoffParams &params, unsigned k, unsigned j)
{
    if (j >= k) throw InputError("reporter must come after the offender");
    return static_cast<double>(params.rho) * params.P2 * static_cast<double>(k - j);
}

Fraction fault_tolerance(std::uint64_t kappa)
{
    if (kappa == 0) throw InputError("fault tolerance needs at least one witness");
    return Fraction{kappa - 1, kappa};
}

std::vector<double> simulate_game(const PayoffParams &params, std::span<const double> profile, std::uint64_t samples,
                                  std::uint64_t seed)
{
    params.validate();
    validate_profile(params, profile);
    if (samples == 0) throw InputError("samples must be at least 1");
    SeededRng rng(seed);
    std::vector<double> sum(params.kappa, 0.0);
    std::vector<bool> outcome(params.kappa);
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (unsigned i = 0; i < params.kappa; ++i)
            outcome[i] = rng.unit() < profile[i];
        for (unsigned w = 1; w <= params.kappa; ++w)
            sum[w - 1] += outcome_payoff(params, outcome, w);
    }
    for (double &v : sum)
        v /= static_cast<double>(samples);
    return sum;
}

double simulate_after_malicious(const PayoffParams &params, std::span<const double> profile, unsigned w,
                                std::uint64_t samples, std::uint64_t seed)
{
    params.validate();
    validate_profile(params, profile);
    if (samples == 0) throw InputError("samples must be at least 1");
    if (w + 1 > params.kappa) throw InputError("position exceeds kappa");
    SeededRng rng(seed);
    const unsigned q = w + 1;
    const double rp2 = static_cast<double>(params.rho) * params.P2;
    double sum = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        // successors q+1..kappa; index 0 is q+1
        std::vector<bool> normal(params.kappa - q);
        for (std::size_t i = 0; i < normal.size(); ++i)
            normal[i] = rng.unit() < profile[q + i];
        bool all_malicious = std::none_of(normal.begin(), normal.end(), [](bool b) { return b; });
        if (q + params.lambda2 <= params.kappa) {
            bool gap = std::none_of(normal.begin(), normal.begin() + (params.lambda2 - 1), [](bool b) { return b; });
            if (gap && normal[params.lambda2 - 1]) sum -= rp2;
        }
        if (all_malicious) sum += params.P2;
    }
    return sum / static_cast<double>(samples);
}

DominanceResult simulate_rational_agents(const PayoffParams &params, BehaviorProfile profile, unsigned iterations,
                                         unsigned burn_in, double exploration, double learning_rate,
                                         std::uint64_t seed)
{
    params.validate();
    validate_profile(params, profile);
    if (burn_in >= iterations) throw InputError("burn-in must be shorter than the run");
    SeededRng rng(seed);
    std::uint64_t honest = 0, total = 0;
    for (unsigned it = 0; it < iterations; ++it) {
        std::vector<bool> action(params.kappa);
        for (unsigned q = 1; q <= params.kappa; ++q) {
            if (rng.unit() < exploration) action[q - 1] = rng.unit() < 0.5;
            else action[q - 1] = equilibrium_margin(params, profile, q - 1) > 0.0;
        }
        for (unsigned q = 0; q < params.kappa; ++q) {
            profile[q] += learning_rate * ((action[q] ? 1.0 : 0.0) - profile[q]);
            if (it >= burn_in) {
                honest += action[q] ? 1 : 0;
                ++total;
            }
        }
    }
    return {static_cast<double>(honest) / static_cast<double>(total), std::move(profile)};
}

} // namespace hldpos
