// Copyright 2026 The FPPDL Authors
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

#include "fppdl/common/error.hpp"

namespace fppdl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kOverflow: return "overflow";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kAuthentication: return "authentication";
    case ErrorCode::kKeyUnwrap: return "key-unwrap";
    case ErrorCode::kRoundMismatch: return "round-mismatch";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kInvalidSignature: return "invalid-signature";
    case ErrorCode::kInsufficientBalance: return "insufficient-balance";
    case ErrorCode::kDanglingReference: return "dangling-reference";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kUnknownParty: return "unknown-party";
    case ErrorCode::kBannedParty: return "banned-party";
    case ErrorCode::kInvalidBan: return "invalid-ban";
    case ErrorCode::kEmpty: return "empty";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kProtocol: return "protocol";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace fppdl
