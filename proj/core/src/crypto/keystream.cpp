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

#include "fppdl/crypto/keystream.hpp"

#include <sodium.h>

#include <algorithm>
#include <string>

#include "fppdl/common/bytes.hpp"
#include "fppdl/common/error.hpp"

namespace fppdl::crypto {

std::uint64_t credible_set_digest(std::span<const PartyId> credible_set) {
  std::vector<PartyId> sorted(credible_set.begin(), credible_set.end());
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          ErrorCode::kDuplicate, "credible set contains a duplicate party");
  ByteWriter w;
  for (PartyId p : sorted) w.u32(p);
  const Digest d = sha256(w.bytes());
  ByteReader r({d.data(), 8});
  return r.u64();
}

void KeystreamDealer::prf(PartyId party, const MessageId& message, std::uint64_t set_digest,
                          const FixedPointCodec& codec, std::span<Word> out) const {
  ensure_sodium();
  static_assert(crypto_stream_xchacha20_NONCEBYTES == 24);
  ByteWriter nonce;
  nonce.u64(message.round);
  nonce.u32(message.aggregator);
  nonce.u32(party);
  nonce.u64(set_digest);

  Bytes stream(out.size() * sizeof(Word));
  crypto_stream_xchacha20(stream.data(), stream.size(), nonce.bytes().data(), seed_.data());
  ByteReader r(stream);
  for (Word& w : out) w = codec.reduce(static_cast<std::int64_t>(r.u64()));
}

std::vector<Keystream> KeystreamDealer::deal(std::span<const PartyId> credible_set,
                                             const MessageId& message, std::size_t dim,
                                             const FixedPointCodec& codec) const {
  require(credible_set.size() >= 2, ErrorCode::kInvalidArgument,
          "keystreams need at least two credible parties");
  std::vector<PartyId> parties(credible_set.begin(), credible_set.end());
  std::sort(parties.begin(), parties.end());
  const std::uint64_t digest = credible_set_digest(parties);

  std::vector<Keystream> out(parties.size());
  std::vector<Word> running(dim, 0);
  for (std::size_t k = 0; k < parties.size(); ++k) {
    Keystream& ks = out[k];
    ks.party = parties[k];
    ks.message = message;
    ks.set_digest = digest;
    ks.pads.resize(dim);
    if (k + 1 < parties.size()) {
      prf(ks.party, message, digest, codec, ks.pads);
      for (std::size_t c = 0; c < dim; ++c) running[c] = codec.add(running[c], ks.pads[c]);
    } else {
      for (std::size_t c = 0; c < dim; ++c) ks.pads[c] = codec.neg(running[c]);
    }
  }
  return out;
}

Word enc(Word plain, Word pad, const FixedPointCodec& codec) {
  require(codec.in_range(plain) && codec.in_range(pad), ErrorCode::kOutOfRange,
          "enc operands must lie in [0, M)");
  return codec.add(plain, pad);
}

Word dec(Word cipher, Word pad, const FixedPointCodec& codec) {
  require(codec.in_range(cipher) && codec.in_range(pad), ErrorCode::kOutOfRange,
          "dec operands must lie in [0, M)");
  return codec.sub(cipher, pad);
}

CipherVector encrypt_vector(std::span<const Word> plain, const Keystream& pad,
                            const FixedPointCodec& codec) {
  require(plain.size() == pad.pads.size(), ErrorCode::kDimensionMismatch,
          "plaintext has " + std::to_string(plain.size()) + " words, keystream " +
              std::to_string(pad.pads.size()));
  CipherVector c;
  c.round_id = pad.message.round;
  c.sender = pad.party;
  c.ciphertexts.resize(plain.size());
  for (std::size_t i = 0; i < plain.size(); ++i) c.ciphertexts[i] = enc(plain[i], pad.pads[i], codec);
  return c;
}

std::vector<Word> aggr_dec(std::span<const CipherVector> ciphers, const Keystream& own_pad,
                           const FixedPointCodec& codec) {
  require(!ciphers.empty(), ErrorCode::kEmpty, "no ciphertexts to aggregate");
  const std::size_t dim = own_pad.pads.size();
  std::vector<PartyId> senders;
  for (const CipherVector& c : ciphers) {
    require(c.round_id == own_pad.message.round, ErrorCode::kRoundMismatch,
            "cipher from party " + std::to_string(c.sender) + " is for round " +
                std::to_string(c.round_id) + ", expected " +
                std::to_string(own_pad.message.round));
    require(c.dim() == dim, ErrorCode::kDimensionMismatch,
            "cipher from party " + std::to_string(c.sender) + " has dim " +
                std::to_string(c.dim()));
    require(c.sender != own_pad.party, ErrorCode::kInvalidArgument,
            "aggregator's own ciphertext in the aggregate");
    senders.push_back(c.sender);
  }
  std::sort(senders.begin(), senders.end());
  require(std::adjacent_find(senders.begin(), senders.end()) == senders.end(),
          ErrorCode::kDuplicate, "two ciphertexts from the same sender");

  std::vector<Word> sum(own_pad.pads);
  for (const CipherVector& c : ciphers) {
    for (std::size_t i = 0; i < dim; ++i) {
      require(codec.in_range(c.ciphertexts[i]), ErrorCode::kOutOfRange, "ciphertext >= M");
      sum[i] = codec.add(sum[i], c.ciphertexts[i]);
    }
  }
  return sum;
}

Bytes serialize(const CipherVector& cipher) {
  ByteWriter w;
  w.u64(cipher.round_id);
  w.u64(cipher.sender);
  w.u64(cipher.dim());
  for (Word c : cipher.ciphertexts) w.u64(c);
  return std::move(w).take();
}

CipherVector parse_cipher_vector(ByteView bytes) {
  ByteReader r(bytes);
  CipherVector c;
  c.round_id = r.u64();
  const std::uint64_t sender = r.u64();
  require(sender <= 0xFFFFFFFFull, ErrorCode::kMalformed, "sender id too large");
  c.sender = static_cast<PartyId>(sender);
  const std::uint64_t dim = r.u64();
  require(dim == r.remaining() / 8 && r.remaining() % 8 == 0, ErrorCode::kMalformed,
          "cipher vector dimension does not match payload length");
  c.ciphertexts.resize(dim);
  for (Word& w : c.ciphertexts) w = r.u64();
  r.expect_done("cipher vector");
  return c;
}

}  // namespace fppdl::crypto
