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

#include "fppdl/ledger/transaction.hpp"

#include <string>

#include "fppdl/common/bytes.hpp"
#include "fppdl/common/error.hpp"
#include "fppdl/crypto/primitives.hpp"

namespace fppdl::ledger {
namespace {

constexpr std::string_view kDomain = "fppdl-tx-v1";
constexpr std::size_t kMaxKeyBytes = 64;

struct BodyWriter {
  ByteWriter& w;
  void operator()(const InitBody& b) const {
    w.u64(b.points);
    w.digest(b.sample_commitment);
    w.blob(b.verify_key);
    w.blob(b.box_key);
  }
  void operator()(const DownloadBody& b) const {
    w.u64(b.round);
    w.u64(b.request_id);
    w.u32(b.target);
    w.u64(b.count);
    w.blob(b.box_key);
  }
  void operator()(const UploadBody& b) const {
    w.u64(b.request_id);
    w.digest(b.payload_commitment);
  }
  void operator()(const ReportBody& b) const {
    w.u64(b.round);
    w.u32(b.pass);
    w.u32(static_cast<std::uint32_t>(b.flagged.size()));
    for (PartyId p : b.flagged) w.u32(p);
  }
  void operator()(const BanBody& b) const {
    w.u64(b.round);
    w.u32(b.pass);
    w.u32(b.banned);
  }
  void operator()(const FineBody& b) const {
    w.u64(b.request_id);
    w.u64(b.amount);
  }
};

Bytes key_blob(ByteReader& r) {
  Bytes k = r.blob();
  require(k.size() <= kMaxKeyBytes, ErrorCode::kMalformed, "key field too long");
  return k;
}

TxBody read_body(TxKind kind, ByteReader& r) {
  switch (kind) {
    case TxKind::kInit: {
      InitBody b;
      b.points = r.u64();
      b.sample_commitment = r.digest();
      b.verify_key = key_blob(r);
      b.box_key = key_blob(r);
      return b;
    }
    case TxKind::kDownload: {
      DownloadBody b;
      b.round = r.u64();
      b.request_id = r.u64();
      b.target = r.u32();
      b.count = r.u64();
      b.box_key = key_blob(r);
      return b;
    }
    case TxKind::kUpload: {
      UploadBody b;
      b.request_id = r.u64();
      b.payload_commitment = r.digest();
      return b;
    }
    case TxKind::kReport: {
      ReportBody b;
      b.round = r.u64();
      b.pass = r.u32();
      const std::uint32_t n = r.u32();
      require(n <= r.remaining() / 4, ErrorCode::kMalformed, "report list longer than payload");
      b.flagged.resize(n);
      for (PartyId& p : b.flagged) p = r.u32();
      return b;
    }
    case TxKind::kBan: {
      BanBody b;
      b.round = r.u64();
      b.pass = r.u32();
      b.banned = r.u32();
      return b;
    }
    case TxKind::kFine: {
      FineBody b;
      b.request_id = r.u64();
      b.amount = r.u64();
      return b;
    }
  }
  fail(ErrorCode::kMalformed, "unknown transaction kind " + std::to_string(static_cast<int>(kind)));
}

}  // namespace

std::string_view to_string(TxKind kind) {
  switch (kind) {
    case TxKind::kInit: return "INIT";
    case TxKind::kDownload: return "DOWNLOAD";
    case TxKind::kUpload: return "UPLOAD";
    case TxKind::kReport: return "REPORT";
    case TxKind::kBan: return "BAN";
    case TxKind::kFine: return "FINE";
  }
  return "?";
}

TxKind Transaction::kind() const {
  return static_cast<TxKind>(body.index() + 1);
}

Bytes Transaction::signing_bytes() const {
  ByteWriter w;
  w.raw({reinterpret_cast<const std::uint8_t*>(kDomain.data()), kDomain.size()});
  w.u8(static_cast<std::uint8_t>(kind()));
  w.u32(creator);
  std::visit(BodyWriter{w}, body);
  return std::move(w).take();
}

Bytes Transaction::encode() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(kind()));
  w.u32(creator);
  std::visit(BodyWriter{w}, body);
  w.blob(signature);
  return std::move(w).take();
}

Transaction Transaction::decode(ByteView bytes) {
  ByteReader r(bytes);
  const auto kind = static_cast<TxKind>(r.u8());
  Transaction tx;
  tx.creator = r.u32();
  tx.body = read_body(kind, r);
  tx.signature = r.blob();
  require(tx.signature.size() <= kMaxKeyBytes, ErrorCode::kMalformed, "signature too long");
  r.expect_done("transaction");
  return tx;
}

Transaction Transaction::make_signed(PartyId creator, TxBody body, ByteView signing_secret_key) {
  Transaction tx;
  tx.creator = creator;
  tx.body = std::move(body);
  tx.signature = crypto::sign(tx.signing_bytes(), signing_secret_key);
  return tx;
}

}  // namespace fppdl::ledger
