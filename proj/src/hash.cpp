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
#include "hldpos/crypto/hash.hpp"

#include "hldpos/error.hpp"

#include <openssl/evp.h>

namespace hldpos {

Digest sha256(ByteView data)
{
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
        throw Error("sha256: EVP_Digest failed");
    return out;
}

HashInput &HashInput::add_u64(std::uint64_t v)
{
    for (int shift = 56; shift >= 0; shift -= 8)
        buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

HashInput &HashInput::add_u32(std::uint32_t v)
{
    for (int shift = 24; shift >= 0; shift -= 8)
        buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

Bytes encode_u64(std::uint64_t v)
{
    Bytes out(8);
    for (std::size_t i = 0; i < 8; ++i)
        out[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
    return out;
}

std::uint64_t digest_prefix_u64(const Digest &d) noexcept
{
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i)
        v = (v << 8) | d[i];
    return v;
}

double digest_to_unit(const Digest &d) noexcept
{
    // top 53 bits / 2^53
    return static_cast<double>(digest_prefix_u64(d) >> 11) * 0x1.0p-53;
}

double hash_to_unit(ByteView data)
{
    return digest_to_unit(sha256(data));
}

std::string to_hex(ByteView data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {

int nibble(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

Bytes from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0)
        throw InputError("from_hex: odd length " + std::to_string(hex.size()));
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw InputError("from_hex: invalid character at offset " + std::to_string(2 * i));
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

Digest digest_from_hex(std::string_view hex)
{
    Bytes raw = from_hex(hex);
    if (raw.size() != 32)
        throw InputError("digest_from_hex: expected 32 bytes, got " + std::to_string(raw.size()));
    Digest d{};
    std::copy(raw.begin(), raw.end(), d.begin());
    return d;
}

} // namespace hldpos
