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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "bkd/crypto.hpp"
#include "bkd/pulse.hpp"

namespace bkd {

// Local randomness beacon: pulse generation, the append-only pulse record,
// chain verification, and random selection from the historical record.
//
// Record invariants:
//   - indices are contiguous starting at 0; append is the only mutation
//   - every pulse's prev_hash equals the chain hash of its predecessor
//     (genesis: 32 zero bytes)
//   - readers never observe a partially appended pulse

enum class ChainFault {
  kPrevHashMismatch,
  kChainHashMismatch,
  kIndexGap,
  kTimestampNonMonotone,
};

std::string_view chain_fault_name(ChainFault fault);

struct ChainVerdict {
  bool ok = true;
  // Present iff !ok: the first expected index at which the chain deviates.
  std::optional<std::uint64_t> first_bad_index;
  std::optional<ChainFault> reason;
};

// Index 0 pulse with an all-zero prev_hash.
Pulse genesis_pulse(EntropySource& rng, std::uint64_t timestamp);

// Successor of prev: index + 1, prev_hash recomputed from prev's fields,
// fresh randomness. Throws kPulseIntegrity if prev fails its self-check and
// kTimestampRegression if timestamp < prev.timestamp.
Pulse next_pulse(const Pulse& prev, EntropySource& rng, std::uint64_t timestamp);

// Walks the chain once and reports the first deviation: index contiguity,
// timestamp monotonicity, per-pulse chain-hash recomputation, and predecessor
// linkage, in that order per pulse. A chain whose first pulse carries a zero
// prev_hash is anchored at genesis and must start at index 0; any other chain
// is treated as a slice anchored at its first stored index.
// Throws kEmptyChain for an empty span.
ChainVerdict verify_chain(std::span<const Pulse> pulses);

// Thread-safe append-only pulse record: many concurrent readers, one appender.
class PulseStore {
 public:
  PulseStore() = default;

  // Adopts an existing chain. Indices must be contiguous from 0.
  explicit PulseStore(std::vector<Pulse> pulses);

  // Appends the next pulse. Its index must equal size(); anything else throws
  // kFieldOutOfRange. Returns the appended index.
  std::uint64_t append(Pulse pulse);

  bool empty() const;
  std::uint64_t size() const;
  std::optional<std::uint64_t> latest_index() const;
  std::optional<Pulse> get(std::uint64_t index) const;
  std::optional<Pulse> latest() const;
  std::vector<Pulse> range(std::uint64_t from, std::uint64_t to) const;  // inclusive
  std::vector<Pulse> snapshot() const;

 private:
  mutable std::shared_mutex mutex_;
  std::vector<Pulse> pulses_;
};

// Appends a freshly generated pulse (genesis if the store is empty) and
// returns it.
Pulse advance_chain(PulseStore& store, EntropySource& rng, std::uint64_t timestamp);

// Uniform draw from the historical record, excluding the newest min_age
// pulses: result index <= latest - min_age. Throws kHistoryTooShort when the
// record is too shallow (or min_age < 1). Seeded rng makes the draw
// reproducible.
Pulse select_historical(const PulseStore& store, EntropySource& rng, std::uint64_t min_age);

// JSON-lines chain files: one pulse object per line, ascending index.
void write_chain(std::span<const Pulse> pulses, std::ostream& out);
void write_chain_file(std::span<const Pulse> pulses, const std::filesystem::path& path);
std::vector<Pulse> read_chain(std::istream& in);
std::vector<Pulse> read_chain_file(const std::filesystem::path& path);

std::uint64_t now_unix_seconds();

}  // namespace bkd
