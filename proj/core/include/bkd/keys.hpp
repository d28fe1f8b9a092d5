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
#include <vector>

#include "bkd/bytes.hpp"
#include "bkd/crypto.hpp"
#include "bkd/pulse.hpp"

namespace bkd {

// Master-secret partitioning and session-key derivation.
//
// A group's pre-shared master secret is split into 256-bit blocks. Block 0 is
// reserved as the MAC key for the agreement channel and is never consumed for
// derivation; blocks 1..n each produce exactly one 256-bit session key when
// combined with a beacon pulse. Two derivation suites are defined, both
// versioned and frozen:
//
//   AES_COMPOSE_V1   XOR-folds the 512-bit pulse into two 128-bit halves,
//                    then chains three AES-256 block encryptions under the
//                    key block so that every pulse bit diffuses into both
//                    halves of the output. The session key is the
//                    concatenation of the last two ciphertext blocks.
//   SHA3_DERIVE_V1   SHA3-256 over a domain-separated preimage of the key
//                    block, the pulse index, and the pulse randomness.
//
// All functions here are pure: no shared state, safe for concurrent callers.

inline constexpr std::size_t kKeyBlockBytes = 32;   // 256-bit blocks
inline constexpr std::size_t kSessionKeyBytes = 32; // 256-bit session keys
inline constexpr std::size_t kMacTagBytes = 32;

inline constexpr std::string_view kDeriveDomain = "BKD-v1-derive";
inline constexpr std::string_view kMacDomain = "BKD-v1-mac";

enum class SuiteId : std::uint8_t {
  kAesComposeV1 = 1,
  kSha3DeriveV1 = 2,
};

std::string_view suite_name(SuiteId suite);
SuiteId suite_from_name(std::string_view name);  // throws kMalformedDocument

enum class BlockState : std::uint8_t {
  kFresh = 0,
  kUsed = 1,
  kRetired = 2,
};

std::string_view block_state_name(BlockState state);
BlockState block_state_from_name(std::string_view name);  // throws kMalformedDocument

// Pre-shared secret as provisioned. Must be at least 64 bytes (one auth block
// plus one derivation block) and a multiple of 32.
struct MasterSecret {
  Bytes bytes;
};

struct KeyBlock {
  std::uint32_t index = 0;  // 0 is the reserved auth block
  std::array<std::uint8_t, kKeyBlockBytes> bytes{};
  BlockState state = BlockState::kFresh;

  bool operator==(const KeyBlock&) const = default;
};

// The partition of one master secret: auth block plus derivation blocks, in
// order, covering the secret exactly.
struct KeyBlockSet {
  KeyBlock auth_block;
  std::vector<KeyBlock> derivation_blocks;  // indices 1..n

  bool operator==(const KeyBlockSet&) const = default;
};

struct SessionKey {
  std::array<std::uint8_t, kSessionKeyBytes> bytes{};
  SuiteId suite_id = SuiteId::kAesComposeV1;
  std::uint32_t block_index = 0;
  std::uint64_t pulse_index = 0;
  Digest32 pulse_chain_hash{};

  bool operator==(const SessionKey&) const = default;
};

// Splits the secret into 32-byte blocks: block 0 becomes the auth block, the
// rest the derivation blocks (all Fresh). Concatenating all blocks in index
// order reproduces the secret exactly.
// Throws kSecretTooShort (< 64 bytes) or kSecretNotAligned (not 32-aligned).
KeyBlockSet partition_master(const MasterSecret& secret);

// AES_COMPOSE_V1. Requires a Fresh block and a pulse whose stored chain hash
// matches recomputation; throws kBlockNotFresh / kPulseIntegrity.
SessionKey derive_session_aes(const KeyBlock& block, const Pulse& pulse);

// SHA3_DERIVE_V1. Same preconditions and errors as derive_session_aes.
SessionKey derive_session_sha3(const KeyBlock& block, const Pulse& pulse);

// Dispatch on suite id.
SessionKey derive_session(SuiteId suite, const KeyBlock& block, const Pulse& pulse);

// Proposal-channel MAC: SHA3-256 over a domain prefix, the reserved auth
// block, and the transcript. The prefix-keyed construction is sound here
// because SHA-3 is not subject to length extension.
// Throws kNotAuthBlock (auth_key.index != 0) or kEmptyTranscript.
Digest32 mac_compute(const KeyBlock& auth_key, std::span<const std::uint8_t> transcript);

// True iff tag equals mac_compute(auth_key, transcript). The comparison is
// timing-uniform. Throws kBadTagLength if tag is not 32 bytes.
bool mac_verify(const KeyBlock& auth_key, std::span<const std::uint8_t> transcript,
                std::span<const std::uint8_t> tag);

}  // namespace bkd
