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

#include "reference/ref_sha3.hpp"

namespace refimpl {

namespace {

constexpr int kRounds = 24;
constexpr std::size_t kRateBytes = 136;  // 1600 - 2*256 bits

constexpr std::uint64_t kRoundConstants[kRounds] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

constexpr int kRotations[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};

constexpr int kPiLane[24] = {10, 7,  11, 17, 18, 3,  5,  16, 8,  21, 24, 4,
                             15, 23, 19, 13, 12, 2,  20, 14, 22, 9,  6,  1};

std::uint64_t rotl64(std::uint64_t v, int shift) {
  return (v << shift) | (v >> (64 - shift));
}

void keccak_f1600(std::uint64_t state[25]) {
  for (int round = 0; round < kRounds; ++round) {
    // theta
    std::uint64_t parity[5];
    for (int x = 0; x < 5; ++x) {
      parity[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
    }
    for (int x = 0; x < 5; ++x) {
      const std::uint64_t d = parity[(x + 4) % 5] ^ rotl64(parity[(x + 1) % 5], 1);
      for (int y = 0; y < 25; y += 5) {
        state[y + x] ^= d;
      }
    }
    // rho + pi
    std::uint64_t current = state[1];
    for (int i = 0; i < 24; ++i) {
      const int lane = kPiLane[i];
      const std::uint64_t next = state[lane];
      state[lane] = rotl64(current, kRotations[i]);
      current = next;
    }
    // chi
    for (int y = 0; y < 25; y += 5) {
      std::uint64_t row[5];
      for (int x = 0; x < 5; ++x) {
        row[x] = state[y + x];
      }
      for (int x = 0; x < 5; ++x) {
        state[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
      }
    }
    // iota
    state[0] ^= kRoundConstants[round];
  }
}

void xor_byte(std::uint64_t state[25], std::size_t offset, std::uint8_t value) {
  state[offset / 8] ^= static_cast<std::uint64_t>(value) << (8 * (offset % 8));
}

std::uint8_t read_byte(const std::uint64_t state[25], std::size_t offset) {
  return static_cast<std::uint8_t>(state[offset / 8] >> (8 * (offset % 8)));
}

}  // namespace

std::array<std::uint8_t, 32> sha3_256(const std::vector<std::uint8_t>& message) {
  std::uint64_t state[25] = {};

  std::size_t block_pos = 0;
  for (std::uint8_t byte : message) {
    xor_byte(state, block_pos++, byte);
    if (block_pos == kRateBytes) {
      keccak_f1600(state);
      block_pos = 0;
    }
  }

  // SHA-3 domain padding: 0x06 ... 0x80 (possibly the same byte).
  xor_byte(state, block_pos, 0x06);
  xor_byte(state, kRateBytes - 1, 0x80);
  keccak_f1600(state);

  std::array<std::uint8_t, 32> digest{};
  for (std::size_t i = 0; i < digest.size(); ++i) {
    digest[i] = read_byte(state, i);
  }
  return digest;
}

}  // namespace refimpl
