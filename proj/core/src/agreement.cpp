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

#include "bkd/agreement.hpp"

#include <nlohmann/json.hpp>

namespace bkd {

namespace {

const KeyBlock* find_derivation_block(const Ledger& ledger, std::uint32_t block_index) {
  for (const KeyBlock& block : ledger.blocks.derivation_blocks) {
    if (block.index == block_index) {
      return &block;
    }
  }
  return nullptr;
}

}  // namespace

Bytes transcript_canonical(const SessionProposal& proposal) {
  if (proposal.group_id.find('|') != std::string::npos) {
    throw Error(ErrorCode::kBadGroupId, "group id may not contain '|'");
  }
  std::string text;
  text.reserve(128 + proposal.group_id.size());
  text.append(proposal.proto);
  text.push_back('|');
  text.append(proposal.group_id);
  text.push_back('|');
  text.append(suite_name(proposal.suite_id));
  text.push_back('|');
  text.append(std::to_string(proposal.block_index));
  text.push_back('|');
  text.append(std::to_string(proposal.pulse_index));
  text.push_back('|');
  text.append(to_hex(proposal.pulse_chain_hash));
  text.push_back('|');
  text.append(to_hex(proposal.nonce));
  return Bytes(text.begin(), text.end());
}

ProposeResult propose_session(Ledger& ledger, const PulseStore& store, EntropySource& rng,
                              SuiteId suite_id, std::uint64_t min_age) {
  const std::uint32_t block_index = next_fresh(ledger);
  const Pulse pulse = select_historical(store, rng, min_age);

  const KeyBlock* block = find_derivation_block(ledger, block_index);
  if (block == nullptr) {
    throw Error(ErrorCode::kUnknownBlock, "no block with index " + std::to_string(block_index));
  }
  const SessionKey key = derive_session(suite_id, *block, pulse);

  SessionProposal proposal;
  proposal.group_id = ledger.group_id;
  proposal.suite_id = suite_id;
  proposal.block_index = block_index;
  proposal.pulse_index = pulse.index;
  proposal.pulse_chain_hash = pulse.chain_hash;
  rng.fill(proposal.nonce);
  proposal.tag = mac_compute(ledger.blocks.auth_block, transcript_canonical(proposal));

  // All checks passed; consume the block last so failures never mutate.
  mark_used(ledger, block_index, pulse.index, pulse.chain_hash, suite_id);

  return ProposeResult{proposal, AgreementOutcome{key, proposal}};
}

AgreementOutcome accept_session(Ledger& ledger, const PulseStore& store,
                                const SessionProposal& proposal) {
  if (proposal.proto != kAgreementProto || proposal.group_id != ledger.group_id) {
    throw Error(ErrorCode::kGroupMismatch,
                "proposal for proto '" + proposal.proto + "' group '" + proposal.group_id +
                    "', ledger group '" + ledger.group_id + "'");
  }
  if (!mac_verify(ledger.blocks.auth_block, transcript_canonical(proposal), proposal.tag)) {
    throw Error(ErrorCode::kBadMac, "proposal tag fails verification");
  }
  const KeyBlock* block = find_derivation_block(ledger, proposal.block_index);
  if (block == nullptr) {
    throw Error(ErrorCode::kUnknownBlock,
                "no block with index " + std::to_string(proposal.block_index));
  }
  if (block->state != BlockState::kFresh) {
    throw Error(ErrorCode::kReplayedBlock,
                "block " + std::to_string(proposal.block_index) + " already consumed");
  }
  const std::optional<Pulse> pulse = store.get(proposal.pulse_index);
  if (!pulse) {
    throw Error(ErrorCode::kUnknownPulse,
                "no local pulse with index " + std::to_string(proposal.pulse_index));
  }
  if (chain_hash_of(*pulse) != proposal.pulse_chain_hash) {
    throw Error(ErrorCode::kPulseBindingMismatch,
                "local pulse " + std::to_string(proposal.pulse_index) +
                    " does not hash to the proposed binding");
  }

  const SessionKey key = derive_session(proposal.suite_id, *block, *pulse);
  mark_used(ledger, proposal.block_index, proposal.pulse_index, proposal.pulse_chain_hash,
            proposal.suite_id);
  return AgreementOutcome{key, proposal};
}

std::vector<GroupMemberResult> group_accept(std::span<Ledger*> ledgers,
                                            std::span<const PulseStore*> stores,
                                            const SessionProposal& proposal) {
  if (ledgers.size() != stores.size()) {
    throw std::invalid_argument("group_accept: one store per ledger required");
  }
  std::vector<GroupMemberResult> results;
  results.reserve(ledgers.size());
  for (std::size_t i = 0; i < ledgers.size(); ++i) {
    GroupMemberResult result;
    result.member = i;
    try {
      result.outcome = accept_session(*ledgers[i], *stores[i], proposal);
    } catch (const Error& e) {
      result.error = e.code();
      result.message = e.what();
    }
    results.push_back(std::move(result));
  }
  return results;
}

std::string proposal_to_json(const SessionProposal& proposal) {
  nlohmann::json doc;
  doc["proto"] = proposal.proto;
  doc["groupId"] = proposal.group_id;
  doc["suiteId"] = std::string(suite_name(proposal.suite_id));
  doc["blockIndex"] = proposal.block_index;
  doc["pulseIndex"] = proposal.pulse_index;
  doc["pulseChainHash"] = to_hex(proposal.pulse_chain_hash);
  doc["nonce"] = to_hex(proposal.nonce);
  doc["tag"] = to_hex(proposal.tag);
  return doc.dump();
}

SessionProposal proposal_from_json(std::string_view json) {
  nlohmann::json doc = nlohmann::json::parse(json, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedDocument, "proposal is not a JSON object");
  }
  try {
    SessionProposal proposal;
    proposal.proto = doc.at("proto").get<std::string>();
    proposal.group_id = doc.at("groupId").get<std::string>();
    proposal.suite_id = suite_from_name(doc.at("suiteId").get<std::string>());
    proposal.block_index = doc.at("blockIndex").get<std::uint32_t>();
    proposal.pulse_index = doc.at("pulseIndex").get<std::uint64_t>();
    proposal.pulse_chain_hash = from_hex_exact<32>(doc.at("pulseChainHash").get<std::string>());
    proposal.nonce = from_hex_exact<kNonceBytes>(doc.at("nonce").get<std::string>());
    proposal.tag = from_hex_exact<32>(doc.at("tag").get<std::string>());
    return proposal;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
}

}  // namespace bkd
