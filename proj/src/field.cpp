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
#include "hldpos/crypto/field.hpp"

#include "hldpos/error.hpp"

namespace hldpos::detail {

namespace {

using u128 = unsigned __int128;

Fe limbs_of(const mpz_class &v)
{
    Fe out{};
    std::size_t count = 0;
    mpz_export(out.data(), &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
    return out;
}

mpz_class mpz_of(const Fe &v)
{
    mpz_class out;
    mpz_import(out.get_mpz_t(), v.size(), -1, sizeof(std::uint64_t), 0, 0, v.data());
    return out;
}

// a >= b
bool geq(const Fe &a, const Fe &b) noexcept
{
    for (std::size_t i = 4; i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return true;
}

std::uint64_t sub_in_place(Fe &a, const Fe &b) noexcept
{
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
        a[i] = static_cast<std::uint64_t>(d);
        borrow = static_cast<std::uint64_t>(d >> 64) & 1;
    }
    return borrow;
}

std::uint64_t add_in_place(Fe &a, const Fe &b) noexcept
{
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        u128 s = static_cast<u128>(a[i]) + b[i] + carry;
        a[i] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
    }
    return carry;
}

} // namespace

MontField::MontField(const mpz_class &p) : p_mpz_(p)
{
    if (p <= 2 || mpz_even_p(p.get_mpz_t()) || mpz_sizeinbase(p.get_mpz_t(), 2) > 256)
        throw ParameterError("field modulus must be odd, > 2 and at most 256 bits");
    p_ = limbs_of(p);
    // Newton iteration for p^-1 mod 2^64, then negate
    std::uint64_t inv = 1;
    for (int i = 0; i < 7; ++i)
        inv *= 2 - p_[0] * inv;
    n0inv_ = ~inv + 1;
    mpz_class r = mpz_class(1) << 256;
    r2_ = limbs_of((r * r) % p);
    one_ = limbs_of(r % p);
}

Fe MontField::to_mont(const mpz_class &v) const
{
    mpz_class reduced = v % p_mpz_;
    if (reduced < 0) reduced += p_mpz_;
    return mul(limbs_of(reduced), r2_);
}

mpz_class MontField::from_mont(const Fe &v) const
{
    Fe one{1, 0, 0, 0};
    return mpz_of(mul(v, one));
}

namespace {

// (hi, lo) = a * b + c + d; cannot overflow 128 bits
inline std::uint64_t mac(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d, std::uint64_t &hi) noexcept
{
    u128 acc = static_cast<u128>(a) * b + c + d;
    hi = static_cast<std::uint64_t>(acc >> 64);
    return static_cast<std::uint64_t>(acc);
}

} // namespace

// CIOS Montgomery multiplication, unrolled over the four limbs
Fe MontField::mul(const Fe &a, const Fe &b) const
{
    const std::uint64_t p0 = p_[0], p1 = p_[1], p2 = p_[2], p3 = p_[3];
    std::uint64_t t0 = 0, t1 = 0, t2 = 0, t3 = 0, t4 = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const std::uint64_t bi = b[i];
        std::uint64_t c;
        t0 = mac(a[0], bi, t0, 0, c);
        t1 = mac(a[1], bi, t1, c, c);
        t2 = mac(a[2], bi, t2, c, c);
        t3 = mac(a[3], bi, t3, c, c);
        u128 top = static_cast<u128>(t4) + c;
        t4 = static_cast<std::uint64_t>(top);
        const std::uint64_t t5 = static_cast<std::uint64_t>(top >> 64);

        const std::uint64_t m = t0 * n0inv_;
        mac(m, p0, t0, 0, c);
        t0 = mac(m, p1, t1, c, c);
        t1 = mac(m, p2, t2, c, c);
        t2 = mac(m, p3, t3, c, c);
        top = static_cast<u128>(t4) + c;
        t3 = static_cast<std::uint64_t>(top);
        t4 = t5 + static_cast<std::uint64_t>(top >> 64);
    }
    Fe out{t0, t1, t2, t3};
    if (t4 != 0 || geq(out, p_))
        sub_in_place(out, p_);
    return out;
}

Fe MontField::add(const Fe &a, const Fe &b) const
{
    Fe out = a;
    std::uint64_t carry = add_in_place(out, b);
    if (carry != 0 || geq(out, p_))
        sub_in_place(out, p_);
    return out;
}

Fe MontField::sub(const Fe &a, const Fe &b) const
{
    Fe out = a;
    if (sub_in_place(out, b) != 0)
        add_in_place(out, p_);
    return out;
}

Fe MontField::inv(const Fe &a) const
{
    mpz_class v = from_mont(a);
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), v.get_mpz_t(), p_mpz_.get_mpz_t()) == 0)
        throw Error("field inverse of zero");
    return to_mont(r);
}

} // namespace hldpos::detail
