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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bkd/beacon.hpp"
#include "bkd/keys.hpp"
#include "bkd/ledger.hpp"

namespace bkd {

// Session establishment. One member proposes a (key block, historical pulse)
// pair in a single MAC-authenticated message; every other member verifies the
// message against its own ledger and pulse record and derives the same
// session key. The same message serves pairwise and group operation, since
// all members hold the same master secret.

inline constexpr std::string_view kAgreementProto = "bkd-agree-1";
inline constexpr std::size_t kNonceBytes = 16;

struct SessionProposal {
  std::string proto = std::string(kAgreementProto);
  std::string group_id;
  SuiteId suite_id = SuiteId::kAesComposeV1;
  std::uint32_t block_index = 0;
  std::uint64_t pulse_index = 0;
  Digest32 pulse_chain_hash{};
  std::array<std::uint8_t, kNonceBytes> nonce{};
  Digest32 tag{};

  bool operator==(const SessionProposal&) const = default;
};

struct AgreementOutcome {
  SessionKey session_key;
  SessionProposal proposal;
};

// Canonical MAC transcript over every proposal field except the tag:
// "<proto>|<group>|<suite>|<block>|<pulse>|<chain hex>|<nonce hex>".
// Injective because group ids exclude '|'. Throws kBadGroupId.
Bytes transcript_canonical(const SessionProposal& proposal);

struct ProposeResult {
  SessionProposal proposal;
  AgreementOutcome outcome;
};

// Proposer path: picks the lowest Fresh block and a uniformly random
// historical pulse at least min_age behind the newest, derives the session
// key, tags the transcript with the auth block, and marks the block Used.
// The ledger is mutated only when the whole operation succeeds.
// Throws kExhausted, kHistoryTooShort.
ProposeResult propose_session(Ledger& ledger, const PulseStore& store, EntropySource& rng,
                              SuiteId suite_id, std::uint64_t min_age);

// Acceptor path. Verification order: proto/group match, MAC over the
// canonical transcript, local block freshness, local pulse existence, local
// pulse hash against the proposed binding. Only then is the key derived and
// the block consumed; any rejection leaves the ledger untouched.
// Throws kGroupMismatch, kBadMac, kReplayedBlock (block already consumed),
// kUnknownBlock, kUnknownPulse, kPulseBindingMismatch.
AgreementOutcome accept_session(Ledger& ledger, const PulseStore& store,
                                const SessionProposal& proposal);

struct GroupMemberResult {
  std::size_t member = 0;
  std::optional<AgreementOutcome> outcome;   // set on success
  std::optional<ErrorCode> error;            // set on failure
  std::string message;
};

// Runs accept_session for every member against its own ledger and store.
// Failures are reported per member and never mask another member's success.
std::vector<GroupMemberResult> group_accept(std::span<Ledger*> ledgers,
                                            std::span<const PulseStore*> stores,
                                            const SessionProposal& proposal);

// Wire codec:
//   {"proto":"bkd-agree-1","groupId":...,"suiteId":"AES_COMPOSE_V1",
//    "blockIndex":N,"pulseIndex":N,"pulseChainHash":"<64 hex>",
//    "nonce":"<32 hex>","tag":"<64 hex>"}
std::string proposal_to_json(const SessionProposal& proposal);
SessionProposal proposal_from_json(std::string_view json);

}  // namespace bkd
