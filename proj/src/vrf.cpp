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
#include "hldpos/crypto/vrf.hpp"

#include "hldpos/error.hpp"

namespace hldpos {

namespace {

constexpr std::string_view keygen_tag = "hldpos-vrf-keygen";
constexpr std::string_view nonce_tag = "nonce";

mpz_class digest_int(const Digest &d) { return Curve::decode_int(ByteView(d)); }

} // namespace

mpz_class derive_secret_scalar(const CurveParams &params, ByteView seed, std::uint32_t counter)
{
    Digest d = HashInput{}.add(keygen_tag).add(seed).add_u32(counter).digest();
    return digest_int(d) % params.order;
}

KeyPair Vrf::keygen(ByteView seed) const
{
    const auto &params = curve_.params();
    for (std::uint32_t counter = 0;; ++counter) {
        mpz_class v = derive_secret_scalar(params, seed, counter);
        if (v == 0) continue;
        KeyPair kp;
        kp.secret.security_exponent = params.security_exponent;
        kp.secret.scalar = std::move(v);
        kp.public_key = curve_.mul_base(kp.secret.scalar);
        return kp;
    }
}

Bytes Vrf::secret_record(const SecretKey &sk) const
{
    Bytes out = HashInput{}.add_u32(sk.security_exponent).bytes();
    Bytes scalar = curve_.encode_scalar(sk.scalar);
    out.insert(out.end(), scalar.begin(), scalar.end());
    return out;
}

Digest Vrf::challenge_for(const AffinePoint &commitment, const AffinePoint &public_key, ByteView input) const
{
    return HashInput{}.add(curve_.encode(commitment)).add(curve_.encode(public_key)).add(input).digest();
}

Digest Vrf::output_for(const mpz_class &response, ByteView input) const
{
    return HashInput{}.add(curve_.encode_scalar(response)).add(input).digest();
}

std::pair<VrfOutput, VrfProof> Vrf::evaluate(const SecretKey &sk, ByteView input) const
{
    return evaluate_with(sk, curve_.mul_base(sk.scalar), input);
}

std::pair<VrfOutput, VrfProof> Vrf::evaluate(const KeyPair &kp, ByteView input) const
{
    return evaluate_with(kp.secret, kp.public_key, input);
}

std::pair<VrfOutput, VrfProof> Vrf::evaluate_with(const SecretKey &sk, const AffinePoint &public_key, ByteView input) const
{
    if (input.empty())
        throw InputError("vrf evaluate: input must be nonempty");
    const auto &order = curve_.params().order;
    Bytes record = secret_record(sk);

    mpz_class r;
    for (std::uint32_t counter = 0; r == 0; ++counter) {
        HashInput h;
        h.add(record).add(input).add(nonce_tag);
        if (counter > 0) h.add_u32(counter);
        r = digest_int(h.digest()) % order;
    }

    VrfProof proof;
    proof.commitment = curve_.mul_base(r);
    proof.challenge = challenge_for(proof.commitment, public_key, input);
    proof.response = (r + digest_int(proof.challenge) * sk.scalar) % order;

    VrfOutput output{output_for(proof.response, input)};
    return {std::move(output), std::move(proof)};
}

bool Vrf::verify(const AffinePoint &public_key, ByteView input, const VrfOutput &output, const VrfProof &proof) const
{
    const auto &order = curve_.params().order;
    if (public_key.infinity || !curve_.on_curve(public_key)) return false;
    if (proof.commitment.infinity || !curve_.on_curve(proof.commitment)) return false;
    if (proof.response < 0 || proof.response >= order) return false;
    if (challenge_for(proof.commitment, public_key, input) != proof.challenge) return false;
    if (output_for(proof.response, input) != output.value) return false;

    AffinePoint lhs = curve_.mul_base(proof.response);
    AffinePoint rhs = curve_.add(proof.commitment, curve_.mul(digest_int(proof.challenge), public_key));
    return lhs == rhs;
}

std::size_t Vrf::proof_size() const
{
    const auto &params = curve_.params();
    return 32 + params.scalar_bytes() + 1 + 2 * params.field_bytes();
}

Bytes Vrf::serialize_proof(const VrfProof &proof) const
{
    Bytes out(proof.challenge.begin(), proof.challenge.end());
    Bytes s = curve_.encode_scalar(proof.response);
    Bytes pt = curve_.encode(proof.commitment);
    out.insert(out.end(), s.begin(), s.end());
    out.insert(out.end(), pt.begin(), pt.end());
    return out;
}

std::optional<VrfProof> Vrf::parse_proof(ByteView raw) const
{
    if (raw.size() != proof_size()) return std::nullopt;
    std::size_t scalar_width = curve_.params().scalar_bytes();
    VrfProof proof;
    std::copy(raw.begin(), raw.begin() + 32, proof.challenge.begin());
    proof.response = Curve::decode_int(raw.subspan(32, scalar_width));
    auto pt = curve_.decode(raw.subspan(32 + scalar_width));
    if (!pt) return std::nullopt;
    proof.commitment = std::move(*pt);
    return proof;
}

} // namespace hldpos
