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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bkd/error.hpp"

namespace bkd {

using Bytes = std::vector<std::uint8_t>;

// Lowercase hex, no prefix. All wire formats in this project use this form.
std::string to_hex(std::span<const std::uint8_t> data);

// Strict inverse of to_hex: even length, lowercase [0-9a-f] only.
// Throws Error(kMalformedDocument) otherwise.
Bytes from_hex(std::string_view hex);

// from_hex with an exact output size, for fixed-width fields.
template <std::size_t N>
std::array<std::uint8_t, N> from_hex_exact(std::string_view hex) {
  if (hex.size() != 2 * N) {
    throw Error(ErrorCode::kMalformedDocument,
                "expected " + std::to_string(2 * N) + " hex chars, got " +
                    std::to_string(hex.size()));
  }
  Bytes raw = from_hex(hex);
  std::array<std::uint8_t, N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

// Timing-uniform equality: examines every byte regardless of where the first
// difference occurs. Returns false on length mismatch without inspecting data.
bool ct_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

std::string to_hex_array32(const std::array<std::uint8_t, 32>& a);

}  // namespace bkd
