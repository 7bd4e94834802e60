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

namespace fppdl::crypto {

using Word = std::uint64_t;

// Smallest power of two >= p_max * n, i.e. 2^ceil(log2(p_max * n)).
std::uint64_t derive_modulus(std::uint64_t p_max, std::uint64_t n);

// Scaling-rounding-unscaling map between reals and Z_M with M a power of two.
// Negative values live in the upper half of the ring (M - |v|).
class FixedPointCodec {
 public:
  static constexpr int kMaxModulusBits = 63;
  static constexpr int kDefaultScaleBits = 16;
  static constexpr int kDefaultModulusBits = 32;

  FixedPointCodec(int scale_bits, std::uint64_t modulus);
  FixedPointCodec() : FixedPointCodec(kDefaultScaleBits, std::uint64_t{1} << kDefaultModulusBits) {}

  static FixedPointCodec with_modulus_bits(int scale_bits, int modulus_bits);

  int scale_bits() const { return scale_bits_; }
  std::uint64_t modulus() const { return modulus_; }
  // Largest reduction error of a single encode/decode round trip, 2^-(scale_bits+1).
  double half_step() const { return 0.5 / scale_; }
  // Magnitudes at or beyond this bound do not fit the signed half-ring.
  double magnitude_limit() const;

  // Throws kOverflow when round(value * 2^scale_bits) falls outside [-M/2, M/2).
  Word encode(double value) const;
  // Throws kOutOfRange for words >= M.
  double decode(Word word) const;

  Word reduce(std::int64_t value) const { return static_cast<Word>(value) & mask_; }
  Word add(Word a, Word b) const { return (a + b) & mask_; }
  Word sub(Word a, Word b) const { return (a - b) & mask_; }
  Word neg(Word a) const { return (~a + 1) & mask_; }
  bool in_range(Word w) const { return w <= mask_; }

  // Clamps each entry to [-clip, clip] before encoding.
  std::vector<Word> encode_vector(std::span<const double> values, double clip) const;
  std::vector<double> decode_vector(std::span<const Word> words) const;

  friend bool operator==(const FixedPointCodec&, const FixedPointCodec&) = default;

 private:
  int scale_bits_;
  std::uint64_t modulus_;
  std::uint64_t mask_;
  double scale_;
};

}  // namespace fppdl::crypto
