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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fppdl/common/types.hpp"
#include "fppdl/ledger/block.hpp"

namespace fppdl::ledger {

struct PartyRecord {
  Bytes verify_key;
  Bytes box_key;
  std::uint64_t balance = 0;
  // Requested by committed DOWNLOADs but not yet settled by an UPLOAD.
  std::uint64_t pending = 0;
  bool banned = false;
};

struct RequestRecord {
  PartyId requester = 0;
  PartyId target = 0;
  std::uint64_t count = 0;
  std::uint64_t round = 0;
  std::uint64_t height = 0;
  bool settled = false;
};

// Everything a replay of the chain derives: registered keys, balances,
// outstanding requests and the ban list.
class LedgerState {
 public:
  // Validates `block` against the current tip and applies it. Throws without
  // mutating anything when any transaction is rejected.
  void apply(const Block& block);

  std::uint64_t next_height() const { return next_height_; }
  const Digest& tip_hash() const { return tip_hash_; }

  const std::map<PartyId, PartyRecord>& parties() const { return parties_; }
  const std::map<std::uint64_t, RequestRecord>& requests() const { return requests_; }
  const PartyRecord& party(PartyId id) const;
  bool is_registered(PartyId id) const { return parties_.contains(id); }

  std::uint64_t minted_total() const { return minted_total_; }
  std::uint64_t frozen_total() const { return frozen_total_; }
  // Sum of balances over parties that are not banned.
  std::uint64_t live_total() const;
  std::uint64_t max_request_id() const { return max_request_id_; }

 private:
  void apply_tx(const Transaction& tx, const Block& block,
                std::map<std::pair<std::uint64_t, std::uint32_t>,
                         std::map<PartyId, std::vector<PartyId>>>& votes);

  std::map<PartyId, PartyRecord> parties_;
  std::map<std::uint64_t, RequestRecord> requests_;
  std::uint64_t minted_total_ = 0;
  std::uint64_t frozen_total_ = 0;
  std::uint64_t max_request_id_ = 0;
  std::uint64_t next_height_ = 0;
  Digest tip_hash_{};
};

// Append-only chain with a single writer. append() is atomic: a rejected
// block leaves both the block list and the derived state untouched.
class Chain {
 public:
  const Block& append(Block block);
  // Fills in height, prev_hash and merkle_root, then appends.
  const Block& append_block(BlockKind kind, std::vector<Transaction> transactions);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }
  const LedgerState& state() const { return state_; }

  std::uint64_t balance(PartyId id) const { return state_.party(id).balance; }
  bool is_banned(PartyId id) const { return state_.party(id).banned; }
  std::uint64_t next_request_id() const { return state_.max_request_id() + 1; }

 private:
  std::vector<Block> blocks_;
  LedgerState state_;
};

struct VerifyReport {
  bool ok = true;
  std::optional<std::uint64_t> first_bad_height;
  std::string reason;
};

// Replays from genesis: hash links, heights, Merkle roots, signatures and
// balance arithmetic.
VerifyReport verify_chain(std::span<const Block> blocks);
inline VerifyReport verify_chain(const Chain& chain) { return verify_chain(chain.blocks()); }

}  // namespace fppdl::ledger
