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

#include "fppdl/common/types.hpp"
#include "fppdl/crypto/codec.hpp"
#include "fppdl/crypto/primitives.hpp"

namespace fppdl::crypto {

// Identifies one aggregation: the round and the party that will decrypt the
// sum. Every (message, credible set) pair gets its own zero-sum pad family.
struct MessageId {
  std::uint64_t round = 0;
  PartyId aggregator = 0;

  friend auto operator<=>(const MessageId&, const MessageId&) = default;
};

struct Keystream {
  PartyId party = 0;
  MessageId message;
  std::uint64_t set_digest = 0;
  std::vector<Word> pads;

  std::uint64_t round_id() const { return message.round; }
};

// Order-independent fingerprint of a credible set. Throws on duplicates.
std::uint64_t credible_set_digest(std::span<const PartyId> credible_set);

// In-process trusted dealer. Pads for all but the highest-id party are
// XChaCha20 output keyed by the dealer seed with nonce (round, aggregator,
// party, set digest); the highest-id party receives the negated sum, so each
// coordinate sums to zero mod M over the credible set.
class KeystreamDealer {
 public:
  explicit KeystreamDealer(const Seed32& seed) : seed_(seed) {}
  explicit KeystreamDealer(std::uint64_t seed) : seed_(expand_seed(seed, 0x6b657973)) {}

  // Throws kInvalidArgument when |credible_set| < 2.
  std::vector<Keystream> deal(std::span<const PartyId> credible_set, const MessageId& message,
                              std::size_t dim, const FixedPointCodec& codec) const;

 private:
  void prf(PartyId party, const MessageId& message, std::uint64_t set_digest,
           const FixedPointCodec& codec, std::span<Word> out) const;

  Seed32 seed_;
};

Word enc(Word plain, Word pad, const FixedPointCodec& codec);
Word dec(Word cipher, Word pad, const FixedPointCodec& codec);

struct CipherVector {
  std::uint64_t round_id = 0;
  PartyId sender = 0;
  std::vector<Word> ciphertexts;

  std::size_t dim() const { return ciphertexts.size(); }
  friend bool operator==(const CipherVector&, const CipherVector&) = default;
};

CipherVector encrypt_vector(std::span<const Word> plain, const Keystream& pad,
                            const FixedPointCodec& codec);

// Sum of the peers' plaintexts: (sum of ciphertexts + own pad) mod M.
std::vector<Word> aggr_dec(std::span<const CipherVector> ciphers, const Keystream& own_pad,
                           const FixedPointCodec& codec);

// Little-endian u64 words: round_id, sender_id, dim, then dim ciphertexts.
Bytes serialize(const CipherVector& cipher);
CipherVector parse_cipher_vector(ByteView bytes);

}  // namespace fppdl::crypto
