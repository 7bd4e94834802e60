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
#include <span>
#include <vector>

#include "fppdl/common/types.hpp"
#include "fppdl/ledger/transaction.hpp"

namespace fppdl::ledger {

// Binary Merkle tree over SHA-256 leaf hashes. Odd levels duplicate their
// last node; a single leaf L yields H(H(L)). Throws kEmpty for no leaves.
Digest merkle_root(std::span<const Bytes> leaves);
Digest merkle_root(std::span<const Transaction> transactions);

enum class BlockKind : std::uint8_t { kInit = 1, kOperation = 2 };

struct Block {
  BlockKind kind = BlockKind::kOperation;
  std::uint64_t height = 0;
  Digest prev_hash{};
  Digest merkle_root{};
  std::vector<Transaction> transactions;

  // kind, height, prev_hash, merkle_root.
  Bytes header_bytes() const;
  Digest hash() const;

  Bytes encode() const;
  static Block decode(ByteView bytes);

  friend bool operator==(const Block&, const Block&) = default;
};

// Builds the height-0 init block. Expects INIT transactions (the validator's
// included) optionally followed by benchmarking REPORT/BAN transactions.
// Throws kDuplicate for a repeated party id and kInvalidArgument when fewer
// than two non-validator parties register.
Block make_genesis(std::vector<Transaction> transactions);

}  // namespace fppdl::ledger
