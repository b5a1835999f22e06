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

#include "hldpos/crypto/field.hpp"
#include "hldpos/crypto/hash.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace hldpos {

/// Short-Weierstrass curve y^2 = x^3 + ax + b over GF(p) with a prime-order
/// base point. `security_exponent` is the exponent of the security
/// parameter 2^iota recorded in secret keys.
struct CurveParams {
    std::string name;
    mpz_class p;
    mpz_class a;
    mpz_class b;
    mpz_class gx;
    mpz_class gy;
    mpz_class order;
    unsigned security_exponent = 256;

    /// NIST P-256 / secp256r1.
    static CurveParams p256();
    /// 16-bit curve (p = 65519, order 65101) for exhaustive tests.
    static CurveParams toy();

    /// Throws ParameterError unless p and the order are prime, the base
    /// point is on the curve, the discriminant is nonzero and the security
    /// parameter is at least as long as the hash.
    void validate() const;

    std::size_t field_bytes() const;
    std::size_t scalar_bytes() const;
};

struct AffinePoint {
    mpz_class x;
    mpz_class y;
    bool infinity = true;

    static AffinePoint at(mpz_class x, mpz_class y) { return AffinePoint{std::move(x), std::move(y), false}; }

    friend bool operator==(const AffinePoint &l, const AffinePoint &r)
    {
        if (l.infinity || r.infinity) return l.infinity == r.infinity;
        return l.x == r.x && l.y == r.y;
    }
};

/// Group arithmetic on one curve. Construction validates the parameters and
/// builds a fixed-base table for the generator, so keep one instance around
/// rather than building it per call. Immutable after construction.
class Curve {
public:
    explicit Curve(CurveParams params);

    const CurveParams &params() const noexcept { return params_; }
    AffinePoint generator() const { return AffinePoint::at(params_.gx, params_.gy); }

    bool on_curve(const AffinePoint &pt) const;
    AffinePoint add(const AffinePoint &l, const AffinePoint &r) const;
    AffinePoint negate(const AffinePoint &pt) const;
    AffinePoint mul(const mpz_class &k, const AffinePoint &pt) const;
    AffinePoint mul_base(const mpz_class &k) const;

    /// 0x04 ‖ X ‖ Y, each coordinate field_bytes wide; infinity is a single 0x00.
    Bytes encode(const AffinePoint &pt) const;
    /// nullopt for wrong length, bad prefix, out-of-range or off-curve points.
    std::optional<AffinePoint> decode(ByteView raw) const;

    Bytes encode_scalar(const mpz_class &k) const;
    static mpz_class decode_int(ByteView raw);

private:
    struct Jacobian {
        detail::Fe x{}, y{}, z{}; // z == 0 is the point at infinity
    };
    struct Affine {
        detail::Fe x{}, y{};
        bool infinity = true;
    };

    Affine to_internal(const AffinePoint &pt) const;
    AffinePoint from_internal(const Affine &pt) const;
    Jacobian to_jacobian(const Affine &pt) const;
    Affine to_affine(const Jacobian &pt) const;
    Jacobian dbl(const Jacobian &pt) const;
    Jacobian add_mixed(const Jacobian &l, const Affine &r) const;
    Jacobian add_full(const Jacobian &l, const Jacobian &r) const;
    static bool is_infinity(const Jacobian &pt) { return detail::MontField::is_zero(pt.z); }

    CurveParams params_;
    detail::MontField field_;
    detail::Fe a_{};
    std::size_t window_count_ = 0;
    // base_table_[i][d - 1] = d * 16^i * G
    std::vector<std::vector<Affine>> base_table_;
};

/// Fixed-width big-endian encoding of a non-negative integer. Throws
/// InputError if the value does not fit.
Bytes encode_fixed(const mpz_class &v, std::size_t width);

} // namespace hldpos
