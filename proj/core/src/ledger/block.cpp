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

#include "fppdl/ledger/block.hpp"

#include <set>
#include <string>

#include "fppdl/common/bytes.hpp"
#include "fppdl/common/error.hpp"
#include "fppdl/crypto/primitives.hpp"

namespace fppdl::ledger {

Digest merkle_root(std::span<const Bytes> leaves) {
  require(!leaves.empty(), ErrorCode::kEmpty, "merkle tree needs at least one leaf");
  std::vector<Digest> level;
  level.reserve(leaves.size() + 1);
  for (const Bytes& leaf : leaves) level.push_back(crypto::sha256(leaf));
  if (level.size() == 1) return crypto::sha256(as_view(level.front()));
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Digest> next;
    next.reserve(level.size() / 2 + 1);
    for (std::size_t i = 0; i < level.size(); i += 2) {
      next.push_back(crypto::sha256_pair(level[i], level[i + 1]));
    }
    level = std::move(next);
  }
  return level.front();
}

Digest merkle_root(std::span<const Transaction> transactions) {
  std::vector<Bytes> leaves;
  leaves.reserve(transactions.size());
  for (const Transaction& tx : transactions) leaves.push_back(tx.encode());
  return merkle_root(leaves);
}

Bytes Block::header_bytes() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(kind));
  w.u64(height);
  w.digest(prev_hash);
  w.digest(merkle_root);
  return std::move(w).take();
}

Digest Block::hash() const { return crypto::sha256(header_bytes()); }

Bytes Block::encode() const {
  ByteWriter w;
  w.raw(header_bytes());
  w.u32(static_cast<std::uint32_t>(transactions.size()));
  for (const Transaction& tx : transactions) w.blob(tx.encode());
  return std::move(w).take();
}

Block Block::decode(ByteView bytes) {
  ByteReader r(bytes);
  Block b;
  const std::uint8_t kind = r.u8();
  require(kind == static_cast<std::uint8_t>(BlockKind::kInit) ||
              kind == static_cast<std::uint8_t>(BlockKind::kOperation),
          ErrorCode::kMalformed, "unknown block kind");
  b.kind = static_cast<BlockKind>(kind);
  b.height = r.u64();
  b.prev_hash = r.digest();
  b.merkle_root = r.digest();
  const std::uint32_t count = r.u32();
  require(count <= r.remaining() / 4, ErrorCode::kMalformed, "transaction count exceeds payload");
  b.transactions.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const Bytes tx = r.blob();
    b.transactions.push_back(Transaction::decode(tx));
  }
  r.expect_done("block");
  return b;
}

Block make_genesis(std::vector<Transaction> transactions) {
  std::set<PartyId> registered;
  std::size_t parties = 0;
  for (const Transaction& tx : transactions) {
    if (tx.kind() != TxKind::kInit) continue;
    require(registered.insert(tx.creator).second, ErrorCode::kDuplicate,
            "party " + std::to_string(tx.creator) + " registered twice");
    if (tx.creator != kValidatorId) ++parties;
  }
  require(parties >= 2, ErrorCode::kInvalidArgument, "genesis needs at least two parties");
  Block b;
  b.kind = BlockKind::kInit;
  b.height = 0;
  b.transactions = std::move(transactions);
  b.merkle_root = merkle_root(b.transactions);
  return b;
}

}  // namespace fppdl::ledger
