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

#include "hldpos/crypto/curve.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace hldpos {

/// Secret half of a VRF key: the scalar together with the security
/// parameter exponent it was generated under.
struct SecretKey {
    unsigned security_exponent = 256;
    mpz_class scalar;
};

struct KeyPair {
    SecretKey secret;
    AffinePoint public_key;
};

struct VrfOutput {
    Digest value{};
    friend bool operator==(const VrfOutput &, const VrfOutput &) = default;
};

/// Schnorr-style proof. `commitment` is R = r·G for the per-evaluation
/// nonce r, which is never exported. The challenge is recomputable by
/// anyone from (R, public key, input).
struct VrfProof {
    Digest challenge{};
    mpz_class response;
    AffinePoint commitment;
};

/// Candidate secret scalar for keygen attempt `counter`; may be zero.
mpz_class derive_secret_scalar(const CurveParams &params, ByteView seed, std::uint32_t counter);

/// Elliptic-curve VRF over a configurable curve.
///
///   keygen:    V = H(tag ‖ seed ‖ ctr) mod n, first nonzero ctr; PK = V·G
///   evaluate:  r = H(sk ‖ x ‖ "nonce") mod n, R = r·G,
///              c = H(R ‖ PK ‖ x), s = r + c·V mod n, output = H(s ‖ x)
///   verify:    s·G == R + c·PK, c == H(R ‖ PK ‖ x), output == H(s ‖ x)
///
/// Points are encoded uncompressed and scalars fixed-width big-endian, so
/// all hash inputs have a single canonical form. Stateless after
/// construction and safe to share between threads.
class Vrf {
public:
    explicit Vrf(CurveParams params) : curve_(std::move(params)) {}

    const Curve &curve() const noexcept { return curve_; }
    const CurveParams &params() const noexcept { return curve_.params(); }

    KeyPair keygen(ByteView seed) const;
    /// Throws InputError on empty input.
    std::pair<VrfOutput, VrfProof> evaluate(const SecretKey &sk, ByteView input) const;
    /// Same result; reuses the stored public key instead of recomputing it.
    std::pair<VrfOutput, VrfProof> evaluate(const KeyPair &kp, ByteView input) const;
    /// Never throws; malformed or off-curve material is a plain reject.
    bool verify(const AffinePoint &public_key, ByteView input, const VrfOutput &output, const VrfProof &proof) const;

    /// Serialized secret key record: u32 exponent ‖ scalar.
    Bytes secret_record(const SecretKey &sk) const;
    Bytes public_key_bytes(const KeyPair &kp) const { return curve_.encode(kp.public_key); }

    /// challenge(32) ‖ response(scalar_bytes) ‖ commitment(point).
    Bytes serialize_proof(const VrfProof &proof) const;
    std::optional<VrfProof> parse_proof(ByteView raw) const;
    std::size_t proof_size() const;

private:
    std::pair<VrfOutput, VrfProof> evaluate_with(const SecretKey &sk, const AffinePoint &public_key, ByteView input) const;
    Digest challenge_for(const AffinePoint &commitment, const AffinePoint &public_key, ByteView input) const;
    Digest output_for(const mpz_class &response, ByteView input) const;

    Curve curve_;
};

} // namespace hldpos
