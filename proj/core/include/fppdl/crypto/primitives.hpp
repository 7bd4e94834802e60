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

#include <array>
#include <cstdint>
#include <span>

#include "fppdl/common/types.hpp"

namespace fppdl::crypto {

// Calls sodium_init() once; every entry point in this module does it implicitly.
void ensure_sodium();

// Repository-wide hash: SHA-256.
Digest sha256(ByteView data);
Digest sha256_pair(const Digest& left, const Digest& right);

using Seed32 = std::array<std::uint8_t, 32>;

Seed32 expand_seed(std::uint64_t seed, std::uint64_t domain);

// Deterministic byte generator. Each draw is produced under a fresh per-draw
// seed (BLAKE2b of key || counter), so no two draws share output.
class Drbg {
 public:
  explicit Drbg(const Seed32& key) : key_(key) {}
  explicit Drbg(std::uint64_t seed) : key_(expand_seed(seed, 0)) {}

  void fill(std::span<std::uint8_t> out);
  Seed32 seed32();
  std::uint64_t draws() const { return counter_; }

 private:
  Seed32 key_;
  std::uint64_t counter_ = 0;
};

struct SigningKeyPair {
  Bytes public_key;  // Ed25519, 32 bytes
  Bytes secret_key;  // 64 bytes
  static SigningKeyPair generate(Drbg& rng);
};

struct BoxKeyPair {
  Bytes public_key;  // X25519, 32 bytes
  Bytes secret_key;  // 32 bytes
  static BoxKeyPair generate(Drbg& rng);
  static BoxKeyPair from_secret(ByteView secret_key);
};

// A party's long-lived key material: (sk', pk') for ledger signatures and
// (sk, pk) for the key-wrapping layer. The entropy seed feeds the party's
// own Drbg for fresh symmetric keys.
struct KeyBundle {
  SigningKeyPair signing;
  BoxKeyPair recipient;
  Seed32 entropy{};
  static KeyBundle generate(Drbg& rng);
};

Bytes sign(ByteView message, ByteView secret_key);
// Never throws; malformed keys or signatures simply fail verification.
bool verify(ByteView message, ByteView signature, ByteView public_key) noexcept;

}  // namespace fppdl::crypto
