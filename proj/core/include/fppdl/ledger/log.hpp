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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fppdl/common/types.hpp"
#include "fppdl/ledger/block.hpp"
#include "fppdl/ledger/chain.hpp"

namespace fppdl::ledger {

inline constexpr std::uint32_t kLogVersion = 1;

// "FPPDLCHN", u32 version, then each block as u32 length + Block::encode().
Bytes export_log(std::span<const Block> blocks);
void write_log(const std::filesystem::path& path, std::span<const Block> blocks);

struct ImportResult {
  std::vector<Block> blocks;
  // Index of the first record that could not be parsed, if any.
  std::optional<std::uint64_t> parse_error_height;
  std::string parse_error;
};

// Parses as many blocks as possible. A bad magic or version is reported as a
// parse error at height 0.
ImportResult import_log(ByteView bytes);
ImportResult read_log(const std::filesystem::path& path);

// Parse plus replay. first_bad_height is the earlier of the parse and replay
// failures.
VerifyReport verify_log(ByteView bytes);

// Content-addressed off-chain storage for onion payloads. UPLOAD transactions
// carry only the SHA-256 key.
class PayloadStore {
 public:
  Digest put(Bytes payload);
  const Bytes& get(const Digest& key) const;
  bool contains(const Digest& key) const { return items_.contains(key); }
  std::size_t size() const { return items_.size(); }
  void clear() { items_.clear(); }

 private:
  std::map<Digest, Bytes> items_;
};

}  // namespace fppdl::ledger
