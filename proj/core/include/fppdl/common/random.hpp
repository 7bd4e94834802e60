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
#include <initializer_list>
#include <random>

namespace fppdl {

using Rng = std::mt19937_64;

// Stream tags keep the derived generators for different purposes disjoint.
enum class Stream : std::uint64_t {
  kShardSplit = 1,
  kSharingLevel,
  kModelInit,
  kShuffle,
  kPublisherPool,
  kPublish,
  kFreeRiderLabels,
  kKeys,
  kOnion,
  kDealer,
  kPartition,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Folds a base seed with a list of tags (stream, party, round, ...) into one
// 64-bit seed. Independent of call order elsewhere, so adding a party never
// shifts another party's randomness.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t t : tags) h = splitmix64(h ^ splitmix64(t + 0x632BE59BD9B4E019ull));
  return h;
}

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(base, tags));
}

constexpr std::uint64_t tag(Stream s) { return static_cast<std::uint64_t>(s); }

}  // namespace fppdl
