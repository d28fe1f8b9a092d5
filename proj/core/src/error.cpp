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

#include "bkd/error.hpp"

namespace bkd {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSecretTooShort: return "SecretTooShort";
    case ErrorCode::kSecretNotAligned: return "SecretNotAligned";
    case ErrorCode::kBlockNotFresh: return "BlockNotFresh";
    case ErrorCode::kPulseIntegrity: return "PulseIntegrity";
    case ErrorCode::kNotAuthBlock: return "NotAuthBlock";
    case ErrorCode::kEmptyTranscript: return "EmptyTranscript";
    case ErrorCode::kBadTagLength: return "BadTagLength";
    case ErrorCode::kFieldOutOfRange: return "FieldOutOfRange";
    case ErrorCode::kEntropyUnavailable: return "EntropyUnavailable";
    case ErrorCode::kTimestampRegression: return "TimestampRegression";
    case ErrorCode::kEmptyChain: return "EmptyChain";
    case ErrorCode::kHistoryTooShort: return "HistoryTooShort";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kBadGroupId: return "BadGroupId";
    case ErrorCode::kExhausted: return "Exhausted";
    case ErrorCode::kUnknownBlock: return "UnknownBlock";
    case ErrorCode::kAuthBlockForbidden: return "AuthBlockForbidden";
    case ErrorCode::kBlockNotUsed: return "BlockNotUsed";
    case ErrorCode::kBadThreshold: return "BadThreshold";
    case ErrorCode::kIntegrityFailure: return "IntegrityFailure";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kGroupMismatch: return "GroupMismatch";
    case ErrorCode::kBadMac: return "BadMac";
    case ErrorCode::kReplayedBlock: return "ReplayedBlock";
    case ErrorCode::kUnknownPulse: return "UnknownPulse";
    case ErrorCode::kPulseBindingMismatch: return "PulseBindingMismatch";
    case ErrorCode::kIoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace bkd
