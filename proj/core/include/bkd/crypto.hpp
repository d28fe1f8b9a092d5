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
#include <random>
#include <span>

#include "bkd/bytes.hpp"

namespace bkd {

using Digest32 = std::array<std::uint8_t, 32>;
using Block16 = std::array<std::uint8_t, 16>;

// SHA3-256 over an arbitrary byte string. Backed by libcrypto.
Digest32 sha3_256(std::span<const std::uint8_t> data);

// One raw AES-256 block encryption (no mode, no padding). Backed by libcrypto.
Block16 aes256_encrypt_block(std::span<const std::uint8_t> key32,
                             std::span<const std::uint8_t> plaintext16);

// Byte source abstraction so protocol operations can run either against the
// OS RNG or a deterministic stream in tests.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  Bytes take(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  template <std::size_t N>
  std::array<std::uint8_t, N> take_array() {
    std::array<std::uint8_t, N> out{};
    fill(out);
    return out;
  }
};

// OS-backed randomness. Throws Error(kEntropyUnavailable) if the platform RNG
// fails.
class SystemEntropy final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Deterministic stream from a 64-bit seed. The mt19937_64 engine has a fully
// specified output sequence, so seeded runs reproduce across platforms.
// Test/replay use only.
class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed) : engine_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 engine_;
};

// Uniform integer in [0, bound) by rejection sampling on raw 64-bit draws.
// Avoids std::uniform_int_distribution, whose output is implementation-defined.
std::uint64_t uniform_below(EntropySource& rng, std::uint64_t bound);

}  // namespace bkd
