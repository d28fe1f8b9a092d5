// Copyright 2026 The BKD Project Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "bkd/bytes.hpp"
#include "bkd/crypto.hpp"

namespace bkd {

inline constexpr std::string_view kPulseVersion = "bkd-1";
inline constexpr std::size_t kPulseRandBytes = 64;  // 512-bit randomness per pulse

// One beacon broadcast. Pulses form a hash chain: each commits to its
// predecessor's digest, and its own digest covers every other field, so any
// historical rewrite is detectable from the record alone.
struct Pulse {
  std::string version = std::string(kPulseVersion);
  std::uint64_t index = 0;
  std::uint64_t timestamp = 0;  // seconds since Unix epoch
  std::array<std::uint8_t, kPulseRandBytes> rand_out{};
  Digest32 prev_hash{};  // all zeros for the genesis pulse
  Digest32 chain_hash{};

  bool operator==(const Pulse&) const = default;
};

// Canonical hashing preimage: "<version>|<index>|<timestamp>|<rand hex>|<prev hex>"
// with decimal integers and lowercase hex. Injective over valid field tuples
// because '|' cannot appear in any field. Throws kFieldOutOfRange if the
// version string contains '|'.
std::string canonical_serialize(std::string_view version, std::uint64_t index,
                                std::uint64_t timestamp,
                                const std::array<std::uint8_t, kPulseRandBytes>& rand_out,
                                const Digest32& prev_hash);

// SHA3-256 of the canonical serialization.
Digest32 chain_hash_of(std::string_view version, std::uint64_t index, std::uint64_t timestamp,
                       const std::array<std::uint8_t, kPulseRandBytes>& rand_out,
                       const Digest32& prev_hash);

// Recomputes the chain hash from the pulse's own fields (ignores the stored
// chain_hash).
Digest32 chain_hash_of(const Pulse& pulse);

// True iff the stored chain_hash matches recomputation.
bool pulse_self_check(const Pulse& pulse);

// Wire codec. Objects look like:
//   {"version":"bkd-1","index":3,"timestamp":1700000000,
//    "randOut":"<128 hex>","prevHash":"<64 hex>","chainHash":"<64 hex>"}
// pulse_from_json validates structure and field widths (kMalformedDocument)
// but does not recompute the chain hash; integrity checks stay with the
// operations that consume the pulse.
std::string pulse_to_json(const Pulse& pulse);
Pulse pulse_from_json(std::string_view json);

}  // namespace bkd
