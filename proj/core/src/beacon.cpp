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

#include "bkd/beacon.hpp"

#include <chrono>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

namespace bkd {

namespace {

constexpr Digest32 kZeroDigest{};

bool stored_hash_matches(const Pulse& pulse) {
  try {
    return chain_hash_of(pulse) == pulse.chain_hash;
  } catch (const Error&) {
    // Unserializable fields can only arise from tampering; count as mismatch.
    return false;
  }
}

}  // namespace

std::string_view chain_fault_name(ChainFault fault) {
  switch (fault) {
    case ChainFault::kPrevHashMismatch: return "PrevHashMismatch";
    case ChainFault::kChainHashMismatch: return "ChainHashMismatch";
    case ChainFault::kIndexGap: return "IndexGap";
    case ChainFault::kTimestampNonMonotone: return "TimestampNonMonotone";
  }
  return "UnknownFault";
}

Pulse genesis_pulse(EntropySource& rng, std::uint64_t timestamp) {
  Pulse pulse;
  pulse.index = 0;
  pulse.timestamp = timestamp;
  rng.fill(pulse.rand_out);
  pulse.prev_hash = kZeroDigest;
  pulse.chain_hash = chain_hash_of(pulse);
  return pulse;
}

Pulse next_pulse(const Pulse& prev, EntropySource& rng, std::uint64_t timestamp) {
  if (!pulse_self_check(prev)) {
    throw Error(ErrorCode::kPulseIntegrity,
                "predecessor pulse " + std::to_string(prev.index) + " fails self-check");
  }
  if (timestamp < prev.timestamp) {
    throw Error(ErrorCode::kTimestampRegression,
                std::to_string(timestamp) + " < " + std::to_string(prev.timestamp));
  }
  Pulse pulse;
  pulse.index = prev.index + 1;
  pulse.timestamp = timestamp;
  rng.fill(pulse.rand_out);
  pulse.prev_hash = chain_hash_of(prev);
  pulse.chain_hash = chain_hash_of(pulse);
  return pulse;
}

ChainVerdict verify_chain(std::span<const Pulse> pulses) {
  if (pulses.empty()) {
    throw Error(ErrorCode::kEmptyChain);
  }

  // A zero prev_hash claims genesis, which pins the anchor to index 0 even if
  // the stored index was tampered with. Otherwise trust the first stored
  // index and verify the slice internally.
  const bool claims_genesis = pulses.front().prev_hash == kZeroDigest;
  const std::uint64_t anchor = claims_genesis ? 0 : pulses.front().index;

  auto fail = [](std::uint64_t index, ChainFault reason) {
    return ChainVerdict{false, index, reason};
  };

  for (std::size_t pos = 0; pos < pulses.size(); ++pos) {
    const Pulse& pulse = pulses[pos];
    const std::uint64_t expected_index = anchor + pos;
    if (pulse.index != expected_index) {
      return fail(expected_index, ChainFault::kIndexGap);
    }
    if (pos > 0 && pulse.timestamp < pulses[pos - 1].timestamp) {
      return fail(expected_index, ChainFault::kTimestampNonMonotone);
    }
    if (!stored_hash_matches(pulse)) {
      return fail(expected_index, ChainFault::kChainHashMismatch);
    }
    if (pos == 0) {
      if (!claims_genesis && pulse.index == 0) {
        // Index 0 must carry the all-zero genesis prev_hash.
        return fail(0, ChainFault::kPrevHashMismatch);
      }
    } else if (pulse.prev_hash != chain_hash_of(pulses[pos - 1])) {
      return fail(expected_index, ChainFault::kPrevHashMismatch);
    }
  }
  return ChainVerdict{};
}

PulseStore::PulseStore(std::vector<Pulse> pulses) : pulses_(std::move(pulses)) {
  for (std::size_t i = 0; i < pulses_.size(); ++i) {
    if (pulses_[i].index != i) {
      throw Error(ErrorCode::kFieldOutOfRange,
                  "pulse at position " + std::to_string(i) + " has index " +
                      std::to_string(pulses_[i].index));
    }
  }
}

std::uint64_t PulseStore::append(Pulse pulse) {
  std::unique_lock lock(mutex_);
  if (pulse.index != pulses_.size()) {
    throw Error(ErrorCode::kFieldOutOfRange,
                "append expects index " + std::to_string(pulses_.size()) + ", got " +
                    std::to_string(pulse.index));
  }
  pulses_.push_back(std::move(pulse));
  return pulses_.size() - 1;
}

bool PulseStore::empty() const {
  std::shared_lock lock(mutex_);
  return pulses_.empty();
}

std::uint64_t PulseStore::size() const {
  std::shared_lock lock(mutex_);
  return pulses_.size();
}

std::optional<std::uint64_t> PulseStore::latest_index() const {
  std::shared_lock lock(mutex_);
  if (pulses_.empty()) {
    return std::nullopt;
  }
  return pulses_.size() - 1;
}

std::optional<Pulse> PulseStore::get(std::uint64_t index) const {
  std::shared_lock lock(mutex_);
  if (index >= pulses_.size()) {
    return std::nullopt;
  }
  return pulses_[index];
}

std::optional<Pulse> PulseStore::latest() const {
  std::shared_lock lock(mutex_);
  if (pulses_.empty()) {
    return std::nullopt;
  }
  return pulses_.back();
}

std::vector<Pulse> PulseStore::range(std::uint64_t from, std::uint64_t to) const {
  std::shared_lock lock(mutex_);
  if (from > to || to >= pulses_.size()) {
    throw Error(ErrorCode::kNotFound,
                "range [" + std::to_string(from) + ", " + std::to_string(to) +
                    "] outside stored chain");
  }
  return std::vector<Pulse>(pulses_.begin() + static_cast<std::ptrdiff_t>(from),
                            pulses_.begin() + static_cast<std::ptrdiff_t>(to) + 1);
}

std::vector<Pulse> PulseStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return pulses_;
}

Pulse advance_chain(PulseStore& store, EntropySource& rng, std::uint64_t timestamp) {
  std::optional<Pulse> prev = store.latest();
  Pulse pulse = prev ? next_pulse(*prev, rng, timestamp) : genesis_pulse(rng, timestamp);
  store.append(pulse);
  return pulse;
}

Pulse select_historical(const PulseStore& store, EntropySource& rng, std::uint64_t min_age) {
  if (min_age < 1) {
    throw Error(ErrorCode::kHistoryTooShort, "min_age must be at least 1");
  }
  const std::optional<std::uint64_t> latest = store.latest_index();
  if (!latest || *latest < min_age) {
    throw Error(ErrorCode::kHistoryTooShort,
                "latest index " + (latest ? std::to_string(*latest) : std::string("none")) +
                    " < min_age " + std::to_string(min_age));
  }
  const std::uint64_t eligible = *latest - min_age;  // newest admissible index
  const std::uint64_t chosen = uniform_below(rng, eligible + 1);
  std::optional<Pulse> pulse = store.get(chosen);
  if (!pulse) {
    throw Error(ErrorCode::kNotFound, "pulse " + std::to_string(chosen) + " vanished");
  }
  return *pulse;
}

void write_chain(std::span<const Pulse> pulses, std::ostream& out) {
  for (const Pulse& pulse : pulses) {
    out << pulse_to_json(pulse) << '\n';
  }
}

void write_chain_file(std::span<const Pulse> pulses, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  }
  write_chain(pulses, out);
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIoError, "short write to " + path.string());
  }
}

std::vector<Pulse> read_chain(std::istream& in) {
  std::vector<Pulse> pulses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      pulses.push_back(pulse_from_json(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedDocument,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pulses;
}

std::vector<Pulse> read_chain_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return read_chain(in);
}

std::uint64_t now_unix_seconds() {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
}

}  // namespace bkd
