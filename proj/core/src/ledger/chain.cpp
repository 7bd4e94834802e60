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

#include "fppdl/ledger/chain.hpp"

#include <algorithm>
#include <set>

#include "fppdl/common/error.hpp"
#include "fppdl/crypto/primitives.hpp"

namespace fppdl::ledger {
namespace {

std::string party_str(PartyId id) {
  return id == kValidatorId ? std::string("validator") : "party " + std::to_string(id);
}

}  // namespace

const PartyRecord& LedgerState::party(PartyId id) const {
  auto it = parties_.find(id);
  require(it != parties_.end(), ErrorCode::kUnknownParty, party_str(id) + " is not registered");
  return it->second;
}

std::uint64_t LedgerState::live_total() const {
  std::uint64_t total = 0;
  for (const auto& [id, rec] : parties_) {
    if (!rec.banned) total += rec.balance;
  }
  return total;
}

void LedgerState::apply(const Block& block) {
  require(block.height == next_height_, ErrorCode::kMalformed,
          "height " + std::to_string(block.height) + ", expected " + std::to_string(next_height_));
  require(block.prev_hash == tip_hash_, ErrorCode::kMalformed, "prev_hash does not link to tip");
  require(next_height_ != 0 || block.kind == BlockKind::kInit, ErrorCode::kMalformed,
          "genesis must be an init block");
  require(!block.transactions.empty(), ErrorCode::kEmpty, "block has no transactions");
  require(merkle_root(block.transactions) == block.merkle_root, ErrorCode::kMalformed,
          "merkle root mismatch");

  LedgerState next = *this;
  std::map<std::pair<std::uint64_t, std::uint32_t>, std::map<PartyId, std::vector<PartyId>>> votes;
  for (const Transaction& tx : block.transactions) next.apply_tx(tx, block, votes);
  next.next_height_ = block.height + 1;
  next.tip_hash_ = block.hash();
  *this = std::move(next);
}

void LedgerState::apply_tx(
    const Transaction& tx, const Block& block,
    std::map<std::pair<std::uint64_t, std::uint32_t>, std::map<PartyId, std::vector<PartyId>>>&
        votes) {
  const TxKind kind = tx.kind();
  const std::string who = party_str(tx.creator);
  const Bytes signed_bytes = tx.signing_bytes();

  if (kind == TxKind::kInit) {
    const auto& body = tx.as<InitBody>();
    require(block.kind == BlockKind::kInit, ErrorCode::kMalformed,
            "INIT outside an init block");
    require(!parties_.contains(tx.creator), ErrorCode::kDuplicate, who + " registered twice");
    require(crypto::verify(signed_bytes, tx.signature, body.verify_key),
            ErrorCode::kInvalidSignature, "INIT by " + who + " is not self-signed");
    require(body.box_key.size() == 32, ErrorCode::kMalformed, "INIT box key has wrong length");
    require(tx.creator != kValidatorId || body.points == 0, ErrorCode::kProtocol,
            "validator cannot hold points");
    PartyRecord rec;
    rec.verify_key = body.verify_key;
    rec.box_key = body.box_key;
    rec.balance = body.points;
    parties_.emplace(tx.creator, std::move(rec));
    minted_total_ += body.points;
    return;
  }

  auto creator_it = parties_.find(tx.creator);
  require(creator_it != parties_.end(), ErrorCode::kUnknownParty, who + " is not registered");
  PartyRecord& creator = creator_it->second;
  require(crypto::verify(signed_bytes, tx.signature, creator.verify_key),
          ErrorCode::kInvalidSignature,
          std::string(to_string(kind)) + " signature by " + who + " does not verify");
  require(!creator.banned, ErrorCode::kBannedParty, who + " is banned");

  auto alive_party = [&](PartyId id) -> PartyRecord& {
    auto it = parties_.find(id);
    require(it != parties_.end() && id != kValidatorId, ErrorCode::kUnknownParty,
            party_str(id) + " is not a registered party");
    require(!it->second.banned, ErrorCode::kBannedParty, party_str(id) + " is banned");
    return it->second;
  };

  switch (kind) {
    case TxKind::kInit:
      break;
    case TxKind::kDownload: {
      const auto& body = tx.as<DownloadBody>();
      require(tx.creator != kValidatorId, ErrorCode::kProtocol, "validator cannot download");
      require(block.kind == BlockKind::kOperation, ErrorCode::kMalformed,
              "DOWNLOAD outside an operation block");
      require(body.target != tx.creator, ErrorCode::kProtocol, "download from self");
      alive_party(body.target);
      require(!requests_.contains(body.request_id), ErrorCode::kDuplicate,
              "request id " + std::to_string(body.request_id) + " already used");
      require(body.box_key == creator.box_key, ErrorCode::kProtocol,
              "DOWNLOAD names a key that is not the requester's registered pk");
      require(creator.balance >= creator.pending &&
                  body.count <= creator.balance - creator.pending,
              ErrorCode::kInsufficientBalance,
              who + " requests " + std::to_string(body.count) + " with " +
                  std::to_string(creator.balance - creator.pending) + " available");
      creator.pending += body.count;
      requests_.emplace(body.request_id, RequestRecord{tx.creator, body.target, body.count,
                                                        body.round, block.height, false});
      max_request_id_ = std::max(max_request_id_, body.request_id);
      return;
    }
    case TxKind::kUpload: {
      const auto& body = tx.as<UploadBody>();
      require(block.kind == BlockKind::kOperation, ErrorCode::kMalformed,
              "UPLOAD outside an operation block");
      auto req_it = requests_.find(body.request_id);
      require(req_it != requests_.end(), ErrorCode::kDanglingReference,
              "UPLOAD references unknown request " + std::to_string(body.request_id));
      RequestRecord& req = req_it->second;
      require(!req.settled, ErrorCode::kDuplicate,
              "request " + std::to_string(body.request_id) + " already settled");
      require(req.target == tx.creator, ErrorCode::kProtocol,
              who + " answers a request addressed to " + party_str(req.target));
      PartyRecord& requester = alive_party(req.requester);
      require(requester.balance >= req.count && requester.pending >= req.count,
              ErrorCode::kInsufficientBalance, "requester cannot settle");
      requester.balance -= req.count;
      requester.pending -= req.count;
      creator.balance += req.count;
      req.settled = true;
      return;
    }
    case TxKind::kReport: {
      const auto& body = tx.as<ReportBody>();
      require(tx.creator != kValidatorId, ErrorCode::kProtocol, "validator cannot report");
      std::set<PartyId> seen;
      for (PartyId p : body.flagged) {
        require(p != tx.creator, ErrorCode::kProtocol, "party reports itself");
        require(seen.insert(p).second, ErrorCode::kDuplicate, "party flagged twice");
        alive_party(p);
        votes[{body.round, body.pass}][p].push_back(tx.creator);
      }
      return;
    }
    case TxKind::kBan: {
      const auto& body = tx.as<BanBody>();
      require(tx.creator == kValidatorId, ErrorCode::kInvalidBan, "only the validator bans");
      PartyRecord& target = alive_party(body.banned);
      std::size_t alive = 0;
      for (const auto& [id, rec] : parties_) {
        if (id != kValidatorId && !rec.banned) ++alive;
      }
      std::size_t support = 0;
      const auto pass_it = votes.find({body.round, body.pass});
      if (pass_it != votes.end()) {
        auto v = pass_it->second.find(body.banned);
        if (v != pass_it->second.end()) {
          for (PartyId reporter : v->second) {
            if (reporter != body.banned && !parties_.at(reporter).banned) ++support;
          }
        }
      }
      require(2 * support > alive - 1, ErrorCode::kInvalidBan,
              "ban of " + party_str(body.banned) + " has " + std::to_string(support) +
                  " reports out of " + std::to_string(alive - 1) + " peers");
      target.banned = true;
      frozen_total_ += target.balance;
      return;
    }
    case TxKind::kFine: {
      const auto& body = tx.as<FineBody>();
      require(requests_.contains(body.request_id), ErrorCode::kDanglingReference,
              "FINE references unknown request");
      return;
    }
  }
}

const Block& Chain::append(Block block) {
  state_.apply(block);
  blocks_.push_back(std::move(block));
  return blocks_.back();
}

const Block& Chain::append_block(BlockKind kind, std::vector<Transaction> transactions) {
  Block b;
  b.kind = kind;
  b.height = state_.next_height();
  b.prev_hash = state_.tip_hash();
  b.transactions = std::move(transactions);
  require(!b.transactions.empty(), ErrorCode::kEmpty, "block has no transactions");
  b.merkle_root = merkle_root(b.transactions);
  return append(std::move(b));
}

VerifyReport verify_chain(std::span<const Block> blocks) {
  LedgerState state;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    try {
      state.apply(blocks[i]);
    } catch (const Error& e) {
      return {false, static_cast<std::uint64_t>(i), e.what()};
    }
    if (state.live_total() + state.frozen_total() != state.minted_total()) {
      return {false, static_cast<std::uint64_t>(i), "balance conservation violated"};
    }
  }
  if (blocks.empty()) return {false, 0, "empty chain"};
  return {};
}

}  // namespace fppdl::ledger
