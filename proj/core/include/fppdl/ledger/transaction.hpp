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

#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "fppdl/common/types.hpp"

namespace fppdl::ledger {

// The single validator that stands in for consensus signs BAN transactions.
inline constexpr PartyId kValidatorId = 0xFFFFFFFFu;

enum class TxKind : std::uint8_t {
  kInit = 1,
  kDownload = 2,
  kUpload = 3,
  kReport = 4,
  kBan = 5,
  kFine = 6,
};

std::string_view to_string(TxKind kind);

struct InitBody {
  std::uint64_t points = 0;
  Digest sample_commitment{};
  Bytes verify_key;  // pk'
  Bytes box_key;     // pk
  friend bool operator==(const InitBody&, const InitBody&) = default;
};

struct DownloadBody {
  std::uint64_t round = 0;
  std::uint64_t request_id = 0;
  PartyId target = 0;
  std::uint64_t count = 0;
  Bytes box_key;  // requester's pk for the key-wrapping layer
  friend bool operator==(const DownloadBody&, const DownloadBody&) = default;
};

struct UploadBody {
  std::uint64_t request_id = 0;  // DLD_request
  Digest payload_commitment{};
  friend bool operator==(const UploadBody&, const UploadBody&) = default;
};

struct ReportBody {
  std::uint64_t round = 0;
  std::uint32_t pass = 0;
  std::vector<PartyId> flagged;
  friend bool operator==(const ReportBody&, const ReportBody&) = default;
};

struct BanBody {
  std::uint64_t round = 0;
  std::uint32_t pass = 0;
  PartyId banned = 0;
  friend bool operator==(const BanBody&, const BanBody&) = default;
};

// Dispute fines are recorded but carry no settlement logic.
struct FineBody {
  std::uint64_t request_id = 0;
  std::uint64_t amount = 0;
  friend bool operator==(const FineBody&, const FineBody&) = default;
};

using TxBody = std::variant<InitBody, DownloadBody, UploadBody, ReportBody, BanBody, FineBody>;

struct Transaction {
  PartyId creator = 0;
  TxBody body;
  Bytes signature;

  TxKind kind() const;
  // Domain tag, kind, creator and body: the bytes covered by the signature.
  Bytes signing_bytes() const;
  // signing_bytes() followed by the length-prefixed signature.
  Bytes encode() const;
  static Transaction decode(ByteView bytes);

  static Transaction make_signed(PartyId creator, TxBody body, ByteView signing_secret_key);

  template <typename T>
  const T& as() const {
    return std::get<T>(body);
  }

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

}  // namespace fppdl::ledger
