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
#include "hldpos/crypto/curve.hpp"

#include "hldpos/error.hpp"

#include <algorithm>

namespace hldpos {

namespace {

constexpr unsigned window_bits = 4;
constexpr unsigned window_size = 1u << window_bits;

mpz_class hex_int(const char *hex) { return mpz_class(hex, 16); }

} // namespace

CurveParams CurveParams::p256()
{
    CurveParams c;
    c.name = "P-256";
    c.p = hex_int("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
    c.a = c.p - 3;
    c.b = hex_int("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b");
    c.gx = hex_int("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296");
    c.gy = hex_int("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5");
    c.order = hex_int("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551");
    c.security_exponent = 256;
    return c;
}

CurveParams CurveParams::toy()
{
    CurveParams c;
    c.name = "toy-65519";
    c.p = 65519;
    c.a = 3;
    c.b = 53;
    c.gx = 4;
    c.gy = 23366;
    c.order = 65101;
    c.security_exponent = 256;
    return c;
}

void CurveParams::validate() const
{
    if (p < 5 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
        throw ParameterError("curve " + name + ": modulus is not prime");
    if (order < 2 || mpz_probab_prime_p(order.get_mpz_t(), 30) == 0)
        throw ParameterError("curve " + name + ": base point order is not prime");
    if (a < 0 || a >= p || b < 0 || b >= p)
        throw ParameterError("curve " + name + ": coefficients must be reduced mod p");
    mpz_class disc = (4 * a * a * a + 27 * b * b) % p;
    if (disc == 0)
        throw ParameterError("curve " + name + ": singular curve (4a^3 + 27b^2 = 0 mod p)");
    mpz_class lhs = (gy * gy) % p;
    mpz_class rhs = (gx * gx * gx + a * gx + b) % p;
    if (gx < 0 || gx >= p || gy < 0 || gy >= p || lhs != rhs)
        throw ParameterError("curve " + name + ": base point is not on the curve");
    // kappa = 2^iota is iota + 1 bits long and must cover the 256-bit hash
    if (security_exponent + 1 < 256)
        throw ParameterError("curve " + name + ": security parameter shorter than the hash output");
}

std::size_t CurveParams::field_bytes() const { return (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8; }

std::size_t CurveParams::scalar_bytes() const { return (mpz_sizeinbase(order.get_mpz_t(), 2) + 7) / 8; }

Bytes encode_fixed(const mpz_class &v, std::size_t width)
{
    if (v < 0)
        throw InputError("encode_fixed: negative value");
    std::size_t bits = v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
    if ((bits + 7) / 8 > width)
        throw InputError("encode_fixed: value wider than " + std::to_string(width) + " bytes");
    Bytes out(width, 0);
    if (v == 0) return out;
    std::size_t count = 0;
    Bytes tmp((bits + 7) / 8);
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(count), out.end() - static_cast<std::ptrdiff_t>(count));
    return out;
}

namespace {

CurveParams validated(CurveParams params)
{
    params.validate();
    return params;
}

} // namespace

Curve::Curve(CurveParams params) : params_(validated(std::move(params))), field_(params_.p), a_(field_.to_mont(params_.a))
{
    std::size_t order_bits = mpz_sizeinbase(params_.order.get_mpz_t(), 2);
    window_count_ = (order_bits + window_bits - 1) / window_bits;
    base_table_.resize(window_count_);
    Affine window_base = to_internal(generator());
    for (std::size_t i = 0; i < window_count_; ++i) {
        auto &row = base_table_[i];
        row.reserve(window_size - 1);
        Jacobian acc = to_jacobian(window_base);
        row.push_back(window_base);
        for (unsigned d = 2; d < window_size; ++d) {
            acc = add_mixed(acc, window_base);
            row.push_back(to_affine(acc));
        }
        // 16 * base = 15 * base + base
        window_base = to_affine(add_mixed(to_jacobian(row.back()), window_base));
    }
}

bool Curve::on_curve(const AffinePoint &pt) const
{
    if (pt.infinity) return true;
    const auto &p = params_.p;
    if (pt.x < 0 || pt.x >= p || pt.y < 0 || pt.y >= p) return false;
    mpz_class lhs = (pt.y * pt.y) % p;
    mpz_class rhs = (pt.x * pt.x * pt.x + params_.a * pt.x + params_.b) % p;
    return lhs == rhs;
}

Curve::Affine Curve::to_internal(const AffinePoint &pt) const
{
    if (pt.infinity) return Affine{};
    return Affine{field_.to_mont(pt.x), field_.to_mont(pt.y), false};
}

AffinePoint Curve::from_internal(const Affine &pt) const
{
    if (pt.infinity) return AffinePoint{};
    return AffinePoint::at(field_.from_mont(pt.x), field_.from_mont(pt.y));
}

Curve::Jacobian Curve::to_jacobian(const Affine &pt) const
{
    if (pt.infinity) return Jacobian{field_.one(), field_.one(), detail::Fe{}};
    return Jacobian{pt.x, pt.y, field_.one()};
}

Curve::Affine Curve::to_affine(const Jacobian &pt) const
{
    if (is_infinity(pt)) return Affine{};
    detail::Fe zinv = field_.inv(pt.z);
    detail::Fe zinv2 = field_.sqr(zinv);
    return Affine{field_.mul(pt.x, zinv2), field_.mul(field_.mul(pt.y, zinv2), zinv), false};
}

// dbl-2007-bl, generic a
Curve::Jacobian Curve::dbl(const Jacobian &pt) const
{
    const auto &f = field_;
    if (is_infinity(pt) || detail::MontField::is_zero(pt.y)) return Jacobian{f.one(), f.one(), detail::Fe{}};
    auto xx = f.sqr(pt.x);
    auto yy = f.sqr(pt.y);
    auto yyyy = f.sqr(yy);
    auto zz = f.sqr(pt.z);
    auto s = f.dbl(f.sub(f.sub(f.sqr(f.add(pt.x, yy)), xx), yyyy));
    auto m = f.add(f.add(f.dbl(xx), xx), f.mul(a_, f.sqr(zz)));
    auto t = f.sub(f.sqr(m), f.dbl(s));
    auto yyyy8 = f.dbl(f.dbl(f.dbl(yyyy)));
    Jacobian out;
    out.x = t;
    out.y = f.sub(f.mul(m, f.sub(s, t)), yyyy8);
    out.z = f.sub(f.sub(f.sqr(f.add(pt.y, pt.z)), yy), zz);
    return out;
}

// madd-2007-bl
Curve::Jacobian Curve::add_mixed(const Jacobian &l, const Affine &r) const
{
    const auto &f = field_;
    if (r.infinity) return l;
    if (is_infinity(l)) return to_jacobian(r);
    auto z1z1 = f.sqr(l.z);
    auto u2 = f.mul(r.x, z1z1);
    auto s2 = f.mul(f.mul(r.y, l.z), z1z1);
    auto h = f.sub(u2, l.x);
    auto rr = f.dbl(f.sub(s2, l.y));
    if (detail::MontField::is_zero(h)) {
        if (detail::MontField::is_zero(rr)) return dbl(l);
        return Jacobian{f.one(), f.one(), detail::Fe{}};
    }
    auto hh = f.sqr(h);
    auto i = f.dbl(f.dbl(hh));
    auto j = f.mul(h, i);
    auto v = f.mul(l.x, i);
    Jacobian out;
    out.x = f.sub(f.sub(f.sqr(rr), j), f.dbl(v));
    out.y = f.sub(f.mul(rr, f.sub(v, out.x)), f.dbl(f.mul(l.y, j)));
    out.z = f.sub(f.sub(f.sqr(f.add(l.z, h)), z1z1), hh);
    return out;
}

// add-2007-bl
Curve::Jacobian Curve::add_full(const Jacobian &l, const Jacobian &r) const
{
    const auto &f = field_;
    if (is_infinity(r)) return l;
    if (is_infinity(l)) return r;
    auto z1z1 = f.sqr(l.z);
    auto z2z2 = f.sqr(r.z);
    auto u1 = f.mul(l.x, z2z2);
    auto u2 = f.mul(r.x, z1z1);
    auto s1 = f.mul(f.mul(l.y, r.z), z2z2);
    auto s2 = f.mul(f.mul(r.y, l.z), z1z1);
    auto h = f.sub(u2, u1);
    auto rr = f.dbl(f.sub(s2, s1));
    if (detail::MontField::is_zero(h)) {
        if (detail::MontField::is_zero(rr)) return dbl(l);
        return Jacobian{f.one(), f.one(), detail::Fe{}};
    }
    auto i = f.sqr(f.dbl(h));
    auto j = f.mul(h, i);
    auto v = f.mul(u1, i);
    Jacobian out;
    out.x = f.sub(f.sub(f.sqr(rr), j), f.dbl(v));
    out.y = f.sub(f.mul(rr, f.sub(v, out.x)), f.dbl(f.mul(s1, j)));
    out.z = f.mul(f.sub(f.sub(f.sqr(f.add(l.z, r.z)), z1z1), z2z2), h);
    return out;
}

AffinePoint Curve::add(const AffinePoint &l, const AffinePoint &r) const
{
    return from_internal(to_affine(add_mixed(to_jacobian(to_internal(l)), to_internal(r))));
}

AffinePoint Curve::negate(const AffinePoint &pt) const
{
    if (pt.infinity) return pt;
    mpz_class y = (params_.p - pt.y) % params_.p;
    return AffinePoint::at(pt.x, std::move(y));
}

namespace {

unsigned window_digit(const mpz_class &k, std::size_t window)
{
    unsigned digit = 0;
    for (unsigned i = window_bits; i-- > 0;)
        digit = (digit << 1) | static_cast<unsigned>(mpz_tstbit(k.get_mpz_t(), window * window_bits + i));
    return digit;
}

} // namespace

AffinePoint Curve::mul(const mpz_class &k, const AffinePoint &pt) const
{
    mpz_class scalar = k % params_.order;
    if (scalar < 0) scalar += params_.order;
    if (scalar == 0 || pt.infinity) return AffinePoint{};

    Affine base = to_internal(pt);
    std::vector<Jacobian> multiples(window_size);
    multiples[1] = to_jacobian(base);
    for (unsigned d = 2; d < window_size; ++d)
        multiples[d] = add_mixed(multiples[d - 1], base);

    std::size_t bits = mpz_sizeinbase(scalar.get_mpz_t(), 2);
    std::size_t windows = (bits + window_bits - 1) / window_bits;
    Jacobian acc{field_.one(), field_.one(), detail::Fe{}};
    for (std::size_t w = windows; w-- > 0;) {
        for (unsigned i = 0; i < window_bits; ++i)
            acc = dbl(acc);
        unsigned digit = window_digit(scalar, w);
        if (digit != 0)
            acc = add_full(acc, multiples[digit]);
    }
    return from_internal(to_affine(acc));
}

AffinePoint Curve::mul_base(const mpz_class &k) const
{
    mpz_class scalar = k % params_.order;
    if (scalar < 0) scalar += params_.order;
    Jacobian acc{field_.one(), field_.one(), detail::Fe{}};
    for (std::size_t w = 0; w < window_count_; ++w) {
        unsigned digit = window_digit(scalar, w);
        if (digit != 0)
            acc = add_mixed(acc, base_table_[w][digit - 1]);
    }
    return from_internal(to_affine(acc));
}

Bytes Curve::encode(const AffinePoint &pt) const
{
    if (pt.infinity) return Bytes{0x00};
    std::size_t width = params_.field_bytes();
    Bytes out;
    out.reserve(1 + 2 * width);
    out.push_back(0x04);
    Bytes x = encode_fixed(pt.x, width);
    Bytes y = encode_fixed(pt.y, width);
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

std::optional<AffinePoint> Curve::decode(ByteView raw) const
{
    std::size_t width = params_.field_bytes();
    if (raw.size() != 1 + 2 * width || raw[0] != 0x04) return std::nullopt;
    AffinePoint pt = AffinePoint::at(decode_int(raw.subspan(1, width)), decode_int(raw.subspan(1 + width, width)));
    if (!on_curve(pt)) return std::nullopt;
    return pt;
}

Bytes Curve::encode_scalar(const mpz_class &k) const { return encode_fixed(k, params_.scalar_bytes()); }

mpz_class Curve::decode_int(ByteView raw)
{
    mpz_class v;
    if (!raw.empty())
        mpz_import(v.get_mpz_t(), raw.size(), 1, 1, 1, 0, raw.data());
    return v;
}

} // namespace hldpos
