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
#include <string>
#include <vector>

#include "bkd/keys.hpp"

namespace bkd {

// Key-block lifecycle. Policy: every derivation block is consumed at most
// once, block scheduling is lowest-index-first so independent parties
// converge on the same block without negotiation, and the reserved auth
// block (index 0) never derives anything.
//
// A ledger value is single-writer: callers serialize mutations through one
// owner; read-only queries may run concurrently between mutations.

inline constexpr std::string_view kLedgerVersion = "bkd-ledger-1";
inline constexpr std::size_t kMaxGroupIdLength = 64;

struct UsageEntry {
  std::uint32_t block_index = 0;
  std::uint64_t pulse_index = 0;
  Digest32 pulse_chain_hash{};
  SuiteId suite_id = SuiteId::kAesComposeV1;

  bool operator==(const UsageEntry&) const = default;
};

struct Ledger {
  std::string group_id;
  KeyBlockSet blocks;
  std::vector<UsageEntry> usage_log;

  bool operator==(const Ledger&) const = default;
};

enum class RotationVerdict {
  kHealthy,
  kRekeySoon,
  kExhausted,
};

std::string_view rotation_verdict_name(RotationVerdict verdict);

struct RotationStatus {
  std::uint64_t fresh_remaining = 0;
  std::uint64_t threshold = 0;
  RotationVerdict verdict = RotationVerdict::kHealthy;
};

// Valid group ids are non-empty, at most 64 chars, printable ASCII, and free
// of '|' (the transcript delimiter). Throws kBadGroupId.
void validate_group_id(std::string_view group_id);

// Partitions the secret and starts an empty usage log with every derivation
// block Fresh. Throws partition errors and kBadGroupId.
Ledger init_ledger(const MasterSecret& secret, std::string group_id);

// Lowest-index Fresh derivation block, without mutating anything.
// Throws kExhausted.
std::uint32_t next_fresh(const Ledger& ledger);

// Marks a Fresh block as Used and appends the usage record. Throws
// kAuthBlockForbidden (index 0), kUnknownBlock, or kBlockNotFresh (single-use
// rule; the call is intentionally not idempotent).
void mark_used(Ledger& ledger, std::uint32_t block_index, std::uint64_t pulse_index,
               const Digest32& pulse_chain_hash, SuiteId suite_id);

// Moves a Used block to Retired (terminal). Throws kAuthBlockForbidden,
// kUnknownBlock, or kBlockNotUsed.
void retire_block(Ledger& ledger, std::uint32_t block_index);

// Counts Fresh blocks against the rekey threshold. Throws kBadThreshold if
// threshold < 1.
RotationStatus rotation_status(const Ledger& ledger, std::uint64_t threshold);

// Persistence: a single-line JSON document followed by "tag=<64 hex>", where
// the tag is the proposal MAC over the document bytes under the auth block.
// load_ledger verifies the tag before parsing anything; a file whose trailer
// is missing or whose tag fails is rejected with kIntegrityFailure, a file
// whose verified body is not valid JSON with kMalformedDocument, and an
// unknown version string with kUnsupportedVersion.
std::string save_ledger(const Ledger& ledger, const KeyBlock& auth_key);
Ledger load_ledger(std::string_view file_bytes, const KeyBlock& auth_key);

// File convenience wrappers used by the CLI. The ledger file is self-keyed
// (the auth block lives in the document), so loading extracts the candidate
// auth block from the untrusted body first and then runs the verified load
// path with it. The tag proves integrity against corruption and against
// tampering by anyone who does not hold the master secret; confidentiality
// of the file is delegated to filesystem permissions.
void save_ledger_file(const Ledger& ledger, const std::filesystem::path& path);
Ledger load_ledger_file(const std::filesystem::path& path);

}  // namespace bkd
