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

#include <cstdint>
#include <span>
#include <vector>

namespace hldpos {

/// Packaging-queue game parameters. Positions are 1-based.
struct PayoffParams {
    double P1 = 10.0; ///< profit of an honest round
    double P2 = 1.0;  ///< gain from a successful attack
    unsigned rho = 1; ///< penalty multiplier
    unsigned kappa = 2; ///< witness count
    unsigned lambda1 = 1; ///< distance back to the offender an honest node reports
    unsigned lambda2 = 1; ///< distance forward to the honest node that reports a malicious one

    /// Throws ParameterError unless rho >= 1, kappa >= 2, lambda1 < kappa
    /// and 0 < lambda2 < kappa. lambda1 = 0 is accepted as the no-offender limit.
    void validate() const;
};

/// Pb^N per position, each in [0, 1]. Pb^M = 1 - Pb^N.
using BehaviorProfile = std::vector<double>;

/// Throws InputError unless the profile has kappa entries in [0, 1].
void validate_profile(const PayoffParams &params, std::span<const double> profile);

/// Payoff of position w in one realized outcome (true = behaved normally).
/// Rules, first match wins:
///   all of 1..w normal                                         -> P1
///   1..w-l1-1 normal, w-l1..w-1 malicious, w normal (l1 < w)   -> l1*rho*P2 + P1
///   w..w+l2-1 malicious, w+l2 normal (w+l2 <= kappa)           -> -rho*P2
///   every position malicious                                   -> P2
///   otherwise                                                  -> 0
double outcome_payoff(const PayoffParams &params, const std::vector<bool> &outcome, unsigned w);

/// Closed-form expectation of outcome_payoff over independent positions.
/// Throws InputError if w is outside [1, kappa].
double expected_profit(const PayoffParams &params, std::span<const double> profile, unsigned w);

/// Expected profit of position w+1 given that it behaves maliciously:
///   prod_{i=w+2}^{w+l2} Pb^M_i ... Pb^N_{w+1+l2} * (-rho*P2)  +  prod_{i=w+2}^{kappa} Pb^M_i * P2
/// Throws InputError if w + 1 > kappa.
double expected_profit_after_malicious(const PayoffParams &params, std::span<const double> profile, unsigned w);

/// lambda1 * rho * P2 + P1.
double expected_profit_after_normal(const PayoffParams &params);

/// E^N - E^M for position w+1.
double equilibrium_margin(const PayoffParams &params, std::span<const double> profile, unsigned w);
/// Smallest margin over w = 0 .. kappa-1.
double equilibrium_margin(const PayoffParams &params, std::span<const double> profile);

/// Bounty of an honest reporter at k for an offender at j: rho * P2 * (k - j).
double report_bounty(const PayoffParams &params, unsigned k, unsigned j);

struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Fraction &) const = default;
};

/// (kappa - 1) / kappa. Throws InputError for kappa == 0.
Fraction fault_tolerance(std::uint64_t kappa);

/// Monte-Carlo mean of outcome_payoff per position (index w-1), sampling
/// each position normal with probability Pb^N. Throws InputError for
/// samples == 0.
std::vector<double> simulate_game(const PayoffParams &params, std::span<const double> profile, std::uint64_t samples,
                                  std::uint64_t seed);

/// Same estimator for expected_profit_after_malicious.
double simulate_after_malicious(const PayoffParams &params, std::span<const double> profile, unsigned w,
                                std::uint64_t samples, std::uint64_t seed);

struct DominanceResult {
    double honest_fraction = 0.0; ///< share of honest actions after burn-in
    BehaviorProfile final_profile;
};

/// Repeated play by margin-following agents. Each iteration every position
/// plays its best response to the current profile (honest iff its margin is
/// positive), or a uniformly random action with probability `exploration`;
/// profiles track action frequencies with step `learning_rate`.
DominanceResult simulate_rational_agents(const PayoffParams &params, BehaviorProfile initial, unsigned iterations,
                                         unsigned burn_in, double exploration, double learning_rate,
                                         std::uint64_t seed);

} // namespace hldpos
