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

#include "bkd/pulse.hpp"

#include <nlohmann/json.hpp>

namespace bkd {

std::string canonical_serialize(std::string_view version, std::uint64_t index,
                                std::uint64_t timestamp,
                                const std::array<std::uint8_t, kPulseRandBytes>& rand_out,
                                const Digest32& prev_hash) {
  if (version.find('|') != std::string_view::npos) {
    throw Error(ErrorCode::kFieldOutOfRange, "pulse version may not contain '|'");
  }
  std::string out;
  out.reserve(version.size() + 2 * kPulseRandBytes + 2 * prev_hash.size() + 48);
  out.append(version);
  out.push_back('|');
  out.append(std::to_string(index));
  out.push_back('|');
  out.append(std::to_string(timestamp));
  out.push_back('|');
  out.append(to_hex(rand_out));
  out.push_back('|');
  out.append(to_hex(prev_hash));
  return out;
}

Digest32 chain_hash_of(std::string_view version, std::uint64_t index, std::uint64_t timestamp,
                       const std::array<std::uint8_t, kPulseRandBytes>& rand_out,
                       const Digest32& prev_hash) {
  const std::string preimage = canonical_serialize(version, index, timestamp, rand_out, prev_hash);
  return sha3_256(
      std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(preimage.data()),
                                    preimage.size()));
}

Digest32 chain_hash_of(const Pulse& pulse) {
  return chain_hash_of(pulse.version, pulse.index, pulse.timestamp, pulse.rand_out,
                       pulse.prev_hash);
}

bool pulse_self_check(const Pulse& pulse) {
  try {
    return chain_hash_of(pulse) == pulse.chain_hash;
  } catch (const Error&) {
    return false;
  }
}

std::string pulse_to_json(const Pulse& pulse) {
  nlohmann::json doc;
  doc["version"] = pulse.version;
  doc["index"] = pulse.index;
  doc["timestamp"] = pulse.timestamp;
  doc["randOut"] = to_hex(pulse.rand_out);
  doc["prevHash"] = to_hex(pulse.prev_hash);
  doc["chainHash"] = to_hex(pulse.chain_hash);
  return doc.dump();
}

Pulse pulse_from_json(std::string_view json) {
  nlohmann::json doc = nlohmann::json::parse(json, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedDocument, "pulse is not a JSON object");
  }
  try {
    Pulse pulse;
    pulse.version = doc.at("version").get<std::string>();
    if (pulse.version != kPulseVersion) {
      throw Error(ErrorCode::kMalformedDocument, "unknown pulse version");
    }
    pulse.index = doc.at("index").get<std::uint64_t>();
    pulse.timestamp = doc.at("timestamp").get<std::uint64_t>();
    pulse.rand_out = from_hex_exact<kPulseRandBytes>(doc.at("randOut").get<std::string>());
    pulse.prev_hash = from_hex_exact<32>(doc.at("prevHash").get<std::string>());
    pulse.chain_hash = from_hex_exact<32>(doc.at("chainHash").get<std::string>());
    return pulse;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
}

}  // namespace bkd
