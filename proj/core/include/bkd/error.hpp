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

#include <stdexcept>
#include <string>
#include <string_view>

namespace bkd {

// Every failure in the library carries one of these codes. The CLI maps each
// code to a stable process exit code, so the numbering and naming here are
// part of the tool's external contract.
enum class ErrorCode {
  // key material / derivation
  kSecretTooShort,
  kSecretNotAligned,
  kBlockNotFresh,
  kPulseIntegrity,
  kNotAuthBlock,
  kEmptyTranscript,
  kBadTagLength,
  // beacon
  kFieldOutOfRange,
  kEntropyUnavailable,
  kTimestampRegression,
  kEmptyChain,
  kHistoryTooShort,
  kNotFound,
  kUnreachable,
  // ledger
  kBadGroupId,
  kExhausted,
  kUnknownBlock,
  kAuthBlockForbidden,
  kBlockNotUsed,
  kBadThreshold,
  kIntegrityFailure,
  kUnsupportedVersion,
  kMalformedDocument,
  // agreement
  kGroupMismatch,
  kBadMac,
  kReplayedBlock,
  kUnknownPulse,
  kPulseBindingMismatch,
  // filesystem / misc
  kIoError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  explicit Error(ErrorCode code) : std::runtime_error(std::string(error_name(code))), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bkd
