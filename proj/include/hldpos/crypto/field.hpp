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

#include <gmpxx.h>

#include <array>
#include <cstdint>

namespace hldpos::detail {

/// Element of GF(p) in Montgomery form, four 64-bit little-endian limbs.
using Fe = std::array<std::uint64_t, 4>;

/// Montgomery arithmetic modulo an odd p < 2^256 with R = 2^256. Works for
/// any odd modulus in range, including tiny test moduli.
class MontField {
public:
    explicit MontField(const mpz_class &p);

    Fe to_mont(const mpz_class &v) const;
    mpz_class from_mont(const Fe &v) const;

    Fe mul(const Fe &a, const Fe &b) const;
    Fe sqr(const Fe &a) const { return mul(a, a); }
    Fe add(const Fe &a, const Fe &b) const;
    Fe sub(const Fe &a, const Fe &b) const;
    Fe dbl(const Fe &a) const { return add(a, a); }
    Fe inv(const Fe &a) const;

    static bool is_zero(const Fe &a) noexcept { return (a[0] | a[1] | a[2] | a[3]) == 0; }
    const Fe &one() const noexcept { return one_; }

private:
    mpz_class p_mpz_;
    Fe p_{};
    Fe r2_{};
    Fe one_{};
    std::uint64_t n0inv_ = 0;
};

} // namespace hldpos::detail
