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

#include "fppdl/crypto/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fppdl/common/error.hpp"

namespace fppdl::crypto {

std::uint64_t derive_modulus(std::uint64_t p_max, std::uint64_t n) {
  require(p_max >= 1, ErrorCode::kInvalidArgument, "p_max must be >= 1");
  require(n >= 2, ErrorCode::kInvalidArgument, "party count must be >= 2");
  require(p_max <= (std::uint64_t{1} << FixedPointCodec::kMaxModulusBits) / n,
          ErrorCode::kOverflow, "p_max * n exceeds 2^63");
  return std::bit_ceil(p_max * n);
}

FixedPointCodec::FixedPointCodec(int scale_bits, std::uint64_t modulus)
    : scale_bits_(scale_bits), modulus_(modulus), mask_(modulus - 1) {
  require(scale_bits >= 0 && scale_bits < FixedPointCodec::kMaxModulusBits,
          ErrorCode::kInvalidArgument, "scale_bits out of range");
  require(modulus >= 2 && std::has_single_bit(modulus), ErrorCode::kInvalidArgument,
          "modulus must be a power of two >= 2");
  require(modulus <= (std::uint64_t{1} << kMaxModulusBits), ErrorCode::kInvalidArgument,
          "modulus may not exceed 2^63");
  require((std::uint64_t{1} << scale_bits) < modulus, ErrorCode::kInvalidArgument,
          "2^scale_bits must be below the modulus");
  scale_ = std::ldexp(1.0, scale_bits);
}

FixedPointCodec FixedPointCodec::with_modulus_bits(int scale_bits, int modulus_bits) {
  require(modulus_bits >= 1 && modulus_bits <= kMaxModulusBits, ErrorCode::kInvalidArgument,
          "modulus_bits out of range");
  return FixedPointCodec(scale_bits, std::uint64_t{1} << modulus_bits);
}

double FixedPointCodec::magnitude_limit() const {
  return static_cast<double>(modulus_ / 2) / scale_;
}

Word FixedPointCodec::encode(double value) const {
  require(std::isfinite(value), ErrorCode::kOverflow, "non-finite value");
  const double half = static_cast<double>(modulus_ / 2);
  const double scaled = std::round(value * scale_);
  if (!(scaled < half && scaled >= -half)) {
    fail(ErrorCode::kOverflow,
         "value " + std::to_string(value) + " exceeds the codec range +-" +
             std::to_string(magnitude_limit()));
  }
  return reduce(static_cast<std::int64_t>(scaled));
}

double FixedPointCodec::decode(Word word) const {
  require(in_range(word), ErrorCode::kOutOfRange, "word not below modulus");
  const std::uint64_t half = modulus_ / 2;
  const std::int64_t signed_value =
      word >= half ? -static_cast<std::int64_t>(modulus_ - word) : static_cast<std::int64_t>(word);
  return static_cast<double>(signed_value) / scale_;
}

std::vector<Word> FixedPointCodec::encode_vector(std::span<const double> values, double clip) const {
  require(clip > 0.0, ErrorCode::kInvalidArgument, "clip bound must be positive");
  std::vector<Word> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double v) { return encode(std::clamp(v, -clip, clip)); });
  return out;
}

std::vector<double> FixedPointCodec::decode_vector(std::span<const Word> words) const {
  std::vector<double> out(words.size());
  std::transform(words.begin(), words.end(), out.begin(), [&](Word w) { return decode(w); });
  return out;
}

}  // namespace fppdl::crypto
