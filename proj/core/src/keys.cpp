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

#include "bkd/keys.hpp"

#include <algorithm>

namespace bkd {

namespace {

Block16 xor16(const Block16& a, const Block16& b) {
  Block16 out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(a[i] ^ b[i]);
  }
  return out;
}

// Counter block j: 15 zero bytes then the byte value j.
Block16 counter_block(std::uint8_t j) {
  Block16 out{};
  out[15] = j;
  return out;
}

Block16 slice16(const std::array<std::uint8_t, kPulseRandBytes>& src, std::size_t offset) {
  Block16 out{};
  std::copy_n(src.begin() + offset, out.size(), out.begin());
  return out;
}

void append_bytes(Bytes& dst, std::span<const std::uint8_t> src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

void append_ascii(Bytes& dst, std::string_view s) {
  dst.insert(dst.end(), s.begin(), s.end());
}

void append_be64(Bytes& dst, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    dst.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void check_derivation_inputs(const KeyBlock& block, const Pulse& pulse) {
  if (block.state != BlockState::kFresh) {
    throw Error(ErrorCode::kBlockNotFresh,
                "block " + std::to_string(block.index) + " is " +
                    std::string(block_state_name(block.state)));
  }
  if (!pulse_self_check(pulse)) {
    throw Error(ErrorCode::kPulseIntegrity,
                "pulse " + std::to_string(pulse.index) + " fails chain-hash recomputation");
  }
}

}  // namespace

std::string_view suite_name(SuiteId suite) {
  switch (suite) {
    case SuiteId::kAesComposeV1: return "AES_COMPOSE_V1";
    case SuiteId::kSha3DeriveV1: return "SHA3_DERIVE_V1";
  }
  throw Error(ErrorCode::kMalformedDocument, "unknown suite id");
}

SuiteId suite_from_name(std::string_view name) {
  if (name == "AES_COMPOSE_V1") return SuiteId::kAesComposeV1;
  if (name == "SHA3_DERIVE_V1") return SuiteId::kSha3DeriveV1;
  throw Error(ErrorCode::kMalformedDocument, "unknown suite name: " + std::string(name));
}

std::string_view block_state_name(BlockState state) {
  switch (state) {
    case BlockState::kFresh: return "Fresh";
    case BlockState::kUsed: return "Used";
    case BlockState::kRetired: return "Retired";
  }
  throw Error(ErrorCode::kMalformedDocument, "unknown block state");
}

BlockState block_state_from_name(std::string_view name) {
  if (name == "Fresh") return BlockState::kFresh;
  if (name == "Used") return BlockState::kUsed;
  if (name == "Retired") return BlockState::kRetired;
  throw Error(ErrorCode::kMalformedDocument, "unknown block state: " + std::string(name));
}

KeyBlockSet partition_master(const MasterSecret& secret) {
  const std::size_t n = secret.bytes.size();
  if (n % kKeyBlockBytes != 0) {
    throw Error(ErrorCode::kSecretNotAligned,
                std::to_string(n) + " bytes is not a multiple of " +
                    std::to_string(kKeyBlockBytes));
  }
  if (n < 2 * kKeyBlockBytes) {
    throw Error(ErrorCode::kSecretTooShort,
                "need at least " + std::to_string(2 * kKeyBlockBytes) + " bytes, got " +
                    std::to_string(n));
  }
  KeyBlockSet set;
  const std::size_t block_count = n / kKeyBlockBytes;
  for (std::size_t i = 0; i < block_count; ++i) {
    KeyBlock block;
    block.index = static_cast<std::uint32_t>(i);
    block.state = BlockState::kFresh;
    std::copy_n(secret.bytes.begin() + static_cast<std::ptrdiff_t>(i * kKeyBlockBytes),
                kKeyBlockBytes, block.bytes.begin());
    if (i == 0) {
      set.auth_block = block;
    } else {
      set.derivation_blocks.push_back(block);
    }
  }
  return set;
}

SessionKey derive_session_aes(const KeyBlock& block, const Pulse& pulse) {
  check_derivation_inputs(block, pulse);

  // Fold the 512-bit pulse into two 128-bit halves.
  const Block16 r1 = slice16(pulse.rand_out, 0);
  const Block16 r2 = slice16(pulse.rand_out, 16);
  const Block16 r3 = slice16(pulse.rand_out, 32);
  const Block16 r4 = slice16(pulse.rand_out, 48);
  const Block16 a = xor16(r1, r3);
  const Block16 b = xor16(r2, r4);

  // Three chained block encryptions under the key block. The chaining feeds
  // each half into the other, so a change to any single pulse bit diffuses
  // into all 256 output bits. The session key concatenates the last two
  // cipher outputs.
  const Block16 t = aes256_encrypt_block(block.bytes, xor16(a, counter_block(1)));
  const Block16 c1 = aes256_encrypt_block(block.bytes, xor16(xor16(b, t), counter_block(2)));
  const Block16 c2 = aes256_encrypt_block(block.bytes, xor16(xor16(a, c1), counter_block(3)));

  SessionKey key;
  std::copy(c1.begin(), c1.end(), key.bytes.begin());
  std::copy(c2.begin(), c2.end(), key.bytes.begin() + 16);
  key.suite_id = SuiteId::kAesComposeV1;
  key.block_index = block.index;
  key.pulse_index = pulse.index;
  key.pulse_chain_hash = pulse.chain_hash;
  return key;
}

SessionKey derive_session_sha3(const KeyBlock& block, const Pulse& pulse) {
  check_derivation_inputs(block, pulse);

  Bytes preimage;
  preimage.reserve(kDeriveDomain.size() + kKeyBlockBytes + 8 + kPulseRandBytes);
  append_ascii(preimage, kDeriveDomain);
  append_bytes(preimage, block.bytes);
  append_be64(preimage, pulse.index);
  append_bytes(preimage, pulse.rand_out);

  SessionKey key;
  key.bytes = sha3_256(preimage);
  key.suite_id = SuiteId::kSha3DeriveV1;
  key.block_index = block.index;
  key.pulse_index = pulse.index;
  key.pulse_chain_hash = pulse.chain_hash;
  return key;
}

SessionKey derive_session(SuiteId suite, const KeyBlock& block, const Pulse& pulse) {
  switch (suite) {
    case SuiteId::kAesComposeV1: return derive_session_aes(block, pulse);
    case SuiteId::kSha3DeriveV1: return derive_session_sha3(block, pulse);
  }
  throw Error(ErrorCode::kMalformedDocument, "unknown suite id");
}

Digest32 mac_compute(const KeyBlock& auth_key, std::span<const std::uint8_t> transcript) {
  if (auth_key.index != 0) {
    throw Error(ErrorCode::kNotAuthBlock,
                "block " + std::to_string(auth_key.index) + " is not the reserved auth block");
  }
  if (transcript.empty()) {
    throw Error(ErrorCode::kEmptyTranscript);
  }
  Bytes preimage;
  preimage.reserve(kMacDomain.size() + kKeyBlockBytes + transcript.size());
  append_ascii(preimage, kMacDomain);
  append_bytes(preimage, auth_key.bytes);
  append_bytes(preimage, transcript);
  return sha3_256(preimage);
}

bool mac_verify(const KeyBlock& auth_key, std::span<const std::uint8_t> transcript,
                std::span<const std::uint8_t> tag) {
  if (tag.size() != kMacTagBytes) {
    throw Error(ErrorCode::kBadTagLength,
                "expected " + std::to_string(kMacTagBytes) + " bytes, got " +
                    std::to_string(tag.size()));
  }
  const Digest32 expected = mac_compute(auth_key, transcript);
  return ct_equal(expected, tag);
}

}  // namespace bkd
