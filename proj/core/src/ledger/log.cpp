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

#include "fppdl/ledger/log.hpp"

#include <cstring>

#include "fppdl/common/bytes.hpp"
#include "fppdl/common/error.hpp"
#include "fppdl/common/io.hpp"
#include "fppdl/crypto/primitives.hpp"

namespace fppdl::ledger {
namespace {

constexpr char kMagic[8] = {'F', 'P', 'P', 'D', 'L', 'C', 'H', 'N'};

}  // namespace

Bytes export_log(std::span<const Block> blocks) {
  ByteWriter w;
  w.raw(ByteView(reinterpret_cast<const std::uint8_t*>(kMagic), sizeof(kMagic)));
  w.u32(kLogVersion);
  for (const Block& b : blocks) w.blob(b.encode());
  return std::move(w).take();
}

void write_log(const std::filesystem::path& path, std::span<const Block> blocks) {
  write_file_atomic(path, export_log(blocks));
}

ImportResult import_log(ByteView bytes) {
  ImportResult out;
  if (bytes.size() < sizeof(kMagic) + 4 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    out.parse_error_height = 0;
    out.parse_error = "missing chain log magic";
    return out;
  }
  ByteReader r(bytes.subspan(sizeof(kMagic)));
  if (r.u32() != kLogVersion) {
    out.parse_error_height = 0;
    out.parse_error = "unsupported chain log version";
    return out;
  }
  while (!r.done()) {
    try {
      const Bytes record = r.blob();
      out.blocks.push_back(Block::decode(record));
    } catch (const Error& e) {
      out.parse_error_height = out.blocks.size();
      out.parse_error = e.what();
      break;
    }
  }
  if (out.blocks.empty() && !out.parse_error_height) {
    out.parse_error_height = 0;
    out.parse_error = "chain log holds no blocks";
  }
  return out;
}

ImportResult read_log(const std::filesystem::path& path) { return import_log(read_file(path)); }

VerifyReport verify_log(ByteView bytes) {
  ImportResult imported = import_log(bytes);
  VerifyReport report = verify_chain(imported.blocks);
  if (!imported.parse_error_height) return report;
  if (report.ok || *imported.parse_error_height <= *report.first_bad_height) {
    return {false, imported.parse_error_height, imported.parse_error};
  }
  return report;
}

Digest PayloadStore::put(Bytes payload) {
  const Digest key = crypto::sha256(payload);
  items_.insert_or_assign(key, std::move(payload));
  return key;
}

const Bytes& PayloadStore::get(const Digest& key) const {
  auto it = items_.find(key);
  require(it != items_.end(), ErrorCode::kDanglingReference, "payload not in store");
  return it->second;
}

}  // namespace fppdl::ledger
