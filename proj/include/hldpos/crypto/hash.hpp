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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hldpos {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 256-bit SHA-256 digest.
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);

inline Digest sha256(std::string_view text)
{
    return sha256(ByteView(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

/// Incremental concatenation helper: `HashInput{}.add(a).add(b).digest()`
/// hashes a ‖ b.
class HashInput {
public:
    HashInput &add(ByteView part)
    {
        buf_.insert(buf_.end(), part.begin(), part.end());
        return *this;
    }
    HashInput &add(std::string_view text)
    {
        buf_.insert(buf_.end(), text.begin(), text.end());
        return *this;
    }
    HashInput &add_u64(std::uint64_t v);
    HashInput &add_u32(std::uint32_t v);

    const Bytes &bytes() const noexcept { return buf_; }
    Digest digest() const { return sha256(buf_); }

private:
    Bytes buf_;
};

/// Big-endian 8-byte encoding.
Bytes encode_u64(std::uint64_t v);

/// Maps bytes to [0,1): SHA-256 of the input read as a big-endian integer
/// and divided by 2^256. Only the top 53 bits survive the conversion to
/// double, and the value is truncated, so the result is always < 1.
double hash_to_unit(ByteView data);

/// Same mapping applied to an existing digest without rehashing.
double digest_to_unit(const Digest &d) noexcept;

/// First 8 bytes of a digest, big-endian. Used to seed PRNG streams.
std::uint64_t digest_prefix_u64(const Digest &d) noexcept;

std::string to_hex(ByteView data);
inline std::string to_hex(const Digest &d) { return to_hex(ByteView(d)); }
/// Throws InputError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);
Digest digest_from_hex(std::string_view hex);

} // namespace hldpos
