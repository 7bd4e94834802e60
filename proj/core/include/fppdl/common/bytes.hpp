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
#include <cstring>
#include <string>
#include <utility>

#include "fppdl/common/error.hpp"
#include "fppdl/common/types.hpp"

namespace fppdl {

// Little-endian append-only encoder used by every wire and ledger format.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void raw(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
  void digest(const Digest& d) { raw(as_view(d)); }
  // u32 length prefix followed by the bytes.
  void blob(ByteView bytes) {
    u32(static_cast<std::uint32_t>(bytes.size()));
    raw(bytes);
  }

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  void put_le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  Bytes out_;
};

// Bounds-checked decoder; any read past the end raises kMalformed.
class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  ByteView raw(std::size_t n) {
    need(n);
    ByteView v = in_.subspan(pos_, n);
    pos_ += n;
    return v;
  }
  Digest digest() {
    Digest d;
    ByteView v = raw(d.size());
    std::memcpy(d.data(), v.data(), d.size());
    return d;
  }
  Bytes blob() {
    const std::uint32_t n = u32();
    ByteView v = raw(n);
    return Bytes(v.begin(), v.end());
  }

  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }
  bool done() const { return pos_ == in_.size(); }
  void expect_done(const char* what) const {
    require(done(), ErrorCode::kMalformed, std::string("trailing bytes after ") + what);
  }

 private:
  void need(std::size_t n) const {
    require(in_.size() - pos_ >= n, ErrorCode::kMalformed, "truncated input");
  }
  std::uint64_t get_le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace fppdl
