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

#include "bkd/ledger.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace bkd {

namespace {

constexpr std::string_view kTagMarker = "\ntag=";

KeyBlock* find_block(Ledger& ledger, std::uint32_t block_index) {
  for (KeyBlock& block : ledger.blocks.derivation_blocks) {
    if (block.index == block_index) {
      return &block;
    }
  }
  return nullptr;
}

nlohmann::json block_to_json(const KeyBlock& block) {
  return nlohmann::json{{"index", block.index},
                        {"state", std::string(block_state_name(block.state))},
                        {"hexBytes", to_hex(block.bytes)}};
}

KeyBlock block_from_json(const nlohmann::json& doc) {
  KeyBlock block;
  block.index = doc.at("index").get<std::uint32_t>();
  block.state = block_state_from_name(doc.at("state").get<std::string>());
  block.bytes = from_hex_exact<kKeyBlockBytes>(doc.at("hexBytes").get<std::string>());
  return block;
}

// Strict trailer parse: "tag=" + exactly 64 lowercase hex chars + optional
// final newline. Anything else means the integrity of the file cannot be
// established.
Digest32 parse_tag_trailer(std::string_view trailer) {
  constexpr std::string_view prefix = "tag=";
  if (trailer.substr(0, prefix.size()) != prefix) {
    throw Error(ErrorCode::kIntegrityFailure, "missing tag trailer");
  }
  std::string_view hex = trailer.substr(prefix.size());
  if (!hex.empty() && hex.back() == '\n') {
    hex.remove_suffix(1);
  }
  if (hex.size() != 2 * kMacTagBytes) {
    throw Error(ErrorCode::kIntegrityFailure, "tag trailer has wrong length");
  }
  try {
    return from_hex_exact<kMacTagBytes>(hex);
  } catch (const Error&) {
    throw Error(ErrorCode::kIntegrityFailure, "tag trailer is not lowercase hex");
  }
}

}  // namespace

std::string_view rotation_verdict_name(RotationVerdict verdict) {
  switch (verdict) {
    case RotationVerdict::kHealthy: return "Healthy";
    case RotationVerdict::kRekeySoon: return "RekeySoon";
    case RotationVerdict::kExhausted: return "Exhausted";
  }
  return "Unknown";
}

void validate_group_id(std::string_view group_id) {
  if (group_id.empty()) {
    throw Error(ErrorCode::kBadGroupId, "group id is empty");
  }
  if (group_id.size() > kMaxGroupIdLength) {
    throw Error(ErrorCode::kBadGroupId, "group id exceeds 64 characters");
  }
  for (char c : group_id) {
    if (c < 0x20 || c > 0x7e || c == '|') {
      throw Error(ErrorCode::kBadGroupId,
                  "group id must be printable ASCII without '|'");
    }
  }
}

Ledger init_ledger(const MasterSecret& secret, std::string group_id) {
  validate_group_id(group_id);
  Ledger ledger;
  ledger.group_id = std::move(group_id);
  ledger.blocks = partition_master(secret);
  return ledger;
}

std::uint32_t next_fresh(const Ledger& ledger) {
  for (const KeyBlock& block : ledger.blocks.derivation_blocks) {
    if (block.state == BlockState::kFresh) {
      return block.index;
    }
  }
  throw Error(ErrorCode::kExhausted, "no Fresh derivation blocks remain");
}

void mark_used(Ledger& ledger, std::uint32_t block_index, std::uint64_t pulse_index,
               const Digest32& pulse_chain_hash, SuiteId suite_id) {
  if (block_index == 0) {
    throw Error(ErrorCode::kAuthBlockForbidden, "block 0 is reserved for authentication");
  }
  KeyBlock* block = find_block(ledger, block_index);
  if (block == nullptr) {
    throw Error(ErrorCode::kUnknownBlock, "no block with index " + std::to_string(block_index));
  }
  if (block->state != BlockState::kFresh) {
    throw Error(ErrorCode::kBlockNotFresh,
                "block " + std::to_string(block_index) + " is " +
                    std::string(block_state_name(block->state)));
  }
  block->state = BlockState::kUsed;
  ledger.usage_log.push_back(UsageEntry{block_index, pulse_index, pulse_chain_hash, suite_id});
}

void retire_block(Ledger& ledger, std::uint32_t block_index) {
  if (block_index == 0) {
    throw Error(ErrorCode::kAuthBlockForbidden, "block 0 is reserved for authentication");
  }
  KeyBlock* block = find_block(ledger, block_index);
  if (block == nullptr) {
    throw Error(ErrorCode::kUnknownBlock, "no block with index " + std::to_string(block_index));
  }
  if (block->state != BlockState::kUsed) {
    throw Error(ErrorCode::kBlockNotUsed,
                "block " + std::to_string(block_index) + " is " +
                    std::string(block_state_name(block->state)));
  }
  block->state = BlockState::kRetired;
}

RotationStatus rotation_status(const Ledger& ledger, std::uint64_t threshold) {
  if (threshold < 1) {
    throw Error(ErrorCode::kBadThreshold, "threshold must be at least 1");
  }
  RotationStatus status;
  status.threshold = threshold;
  for (const KeyBlock& block : ledger.blocks.derivation_blocks) {
    if (block.state == BlockState::kFresh) {
      ++status.fresh_remaining;
    }
  }
  if (status.fresh_remaining == 0) {
    status.verdict = RotationVerdict::kExhausted;
  } else if (status.fresh_remaining <= threshold) {
    status.verdict = RotationVerdict::kRekeySoon;
  } else {
    status.verdict = RotationVerdict::kHealthy;
  }
  return status;
}

std::string save_ledger(const Ledger& ledger, const KeyBlock& auth_key) {
  nlohmann::json blocks = nlohmann::json::array();
  blocks.push_back(block_to_json(ledger.blocks.auth_block));
  for (const KeyBlock& block : ledger.blocks.derivation_blocks) {
    blocks.push_back(block_to_json(block));
  }
  nlohmann::json usage = nlohmann::json::array();
  for (const UsageEntry& entry : ledger.usage_log) {
    usage.push_back({{"blockIndex", entry.block_index},
                     {"pulseIndex", entry.pulse_index},
                     {"pulseChainHash", to_hex(entry.pulse_chain_hash)},
                     {"suiteId", std::string(suite_name(entry.suite_id))}});
  }
  nlohmann::json doc{{"version", std::string(kLedgerVersion)},
                     {"groupId", ledger.group_id},
                     {"blocks", std::move(blocks)},
                     {"usageLog", std::move(usage)}};
  const std::string body = doc.dump();
  const Digest32 tag = mac_compute(
      auth_key, std::span<const std::uint8_t>(
                    reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
  return body + std::string(kTagMarker) + to_hex(tag) + "\n";
}

Ledger load_ledger(std::string_view file_bytes, const KeyBlock& auth_key) {
  // The document is a single line, so the last "\ntag=" is the trailer
  // boundary. Integrity is established before any parsing of the body.
  const std::size_t marker = file_bytes.rfind(kTagMarker);
  if (marker == std::string_view::npos) {
    throw Error(ErrorCode::kIntegrityFailure, "no tag trailer found");
  }
  const std::string_view body = file_bytes.substr(0, marker);
  const Digest32 tag = parse_tag_trailer(file_bytes.substr(marker + 1));
  if (!mac_verify(auth_key,
                  std::span<const std::uint8_t>(
                      reinterpret_cast<const std::uint8_t*>(body.data()), body.size()),
                  tag)) {
    throw Error(ErrorCode::kIntegrityFailure, "ledger tag mismatch");
  }

  nlohmann::json doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedDocument, "ledger body is not a JSON object");
  }
  try {
    const std::string version = doc.at("version").get<std::string>();
    if (version != kLedgerVersion) {
      throw Error(ErrorCode::kUnsupportedVersion, "ledger version " + version);
    }
    Ledger ledger;
    ledger.group_id = doc.at("groupId").get<std::string>();
    validate_group_id(ledger.group_id);

    const nlohmann::json& blocks = doc.at("blocks");
    if (!blocks.is_array() || blocks.empty()) {
      throw Error(ErrorCode::kMalformedDocument, "blocks array missing or empty");
    }
    for (const nlohmann::json& item : blocks) {
      KeyBlock block = block_from_json(item);
      if (block.index == 0) {
        ledger.blocks.auth_block = block;
      } else {
        ledger.blocks.derivation_blocks.push_back(block);
      }
    }
    for (const nlohmann::json& item : doc.at("usageLog")) {
      UsageEntry entry;
      entry.block_index = item.at("blockIndex").get<std::uint32_t>();
      entry.pulse_index = item.at("pulseIndex").get<std::uint64_t>();
      entry.pulse_chain_hash = from_hex_exact<32>(item.at("pulseChainHash").get<std::string>());
      entry.suite_id = suite_from_name(item.at("suiteId").get<std::string>());
      ledger.usage_log.push_back(entry);
    }
    return ledger;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
}

void save_ledger_file(const Ledger& ledger, const std::filesystem::path& path) {
  const std::string contents = save_ledger(ledger, ledger.blocks.auth_block);
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIoError, "short write to " + path.string());
  }
}

Ledger load_ledger_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string contents = buffer.str();

  // Pull the candidate auth block out of the untrusted body, then run the
  // tag-first load path with it.
  const std::size_t marker = contents.rfind(kTagMarker);
  if (marker == std::string::npos) {
    throw Error(ErrorCode::kIntegrityFailure, "no tag trailer found");
  }
  nlohmann::json doc = nlohmann::json::parse(contents.substr(0, marker), nullptr,
                                             /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedDocument, "ledger body is not a JSON object");
  }
  KeyBlock auth_key;
  try {
    bool found = false;
    for (const nlohmann::json& item : doc.at("blocks")) {
      if (item.at("index").get<std::uint32_t>() == 0) {
        auth_key = block_from_json(item);
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::kMalformedDocument, "no auth block in ledger file");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  return load_ledger(contents, auth_key);
}

}  // namespace bkd
