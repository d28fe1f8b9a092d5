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

#include <bit>
#include <cstdint>
#include <random>

#include "bkd/agreement.hpp"
#include "bkd/beacon.hpp"
#include "bkd/keys.hpp"
#include "bkd/ledger.hpp"

namespace testutil {

inline bkd::Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  bkd::Bytes out(n);
  for (auto& b : out) {
    b = static_cast<std::uint8_t>(rng());
  }
  return out;
}

template <std::size_t N>
std::array<std::uint8_t, N> random_array(std::mt19937_64& rng) {
  std::array<std::uint8_t, N> out{};
  for (auto& b : out) {
    b = static_cast<std::uint8_t>(rng());
  }
  return out;
}

// Master secret with one auth block plus `derivation_blocks` derivation blocks.
inline bkd::MasterSecret random_secret(std::mt19937_64& rng, std::size_t derivation_blocks) {
  return bkd::MasterSecret{random_bytes(rng, 32 * (derivation_blocks + 1))};
}

inline bkd::KeyBlock fresh_block(std::uint32_t index, const std::array<std::uint8_t, 32>& bytes) {
  return bkd::KeyBlock{index, bytes, bkd::BlockState::kFresh};
}

// Self-consistent pulse chain of `count` pulses, deterministic per seed.
inline std::vector<bkd::Pulse> build_chain(std::uint64_t seed, std::size_t count,
                                           std::uint64_t t0 = 1700000000) {
  bkd::SeededEntropy entropy(seed);
  std::vector<bkd::Pulse> chain;
  chain.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    chain.push_back(i == 0 ? bkd::genesis_pulse(entropy, t0)
                           : bkd::next_pulse(chain.back(), entropy, t0 + i));
  }
  return chain;
}

inline bkd::PulseStore build_store(std::uint64_t seed, std::size_t count) {
  return bkd::PulseStore(build_chain(seed, count));
}

// A standalone pulse (not part of any particular chain) whose stored chain
// hash is self-consistent, so derivation accepts it.
inline bkd::Pulse make_pulse(std::mt19937_64& rng, std::uint64_t index = 0,
                             std::uint64_t timestamp = 1700000000) {
  bkd::Pulse pulse;
  pulse.index = index;
  pulse.timestamp = timestamp;
  pulse.rand_out = random_array<bkd::kPulseRandBytes>(rng);
  pulse.prev_hash = random_array<32>(rng);
  if (index == 0) {
    pulse.prev_hash = {};
  }
  pulse.chain_hash = bkd::chain_hash_of(pulse);
  return pulse;
}

inline std::size_t hamming_distance(const std::array<std::uint8_t, 32>& a,
                                    const std::array<std::uint8_t, 32>& b) {
  std::size_t bits = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    bits += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
  }
  return bits;
}

}  // namespace testutil
