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

#include "fppdl/crypto/onion.hpp"

#include <sodium.h>

#include <array>
#include <cstring>

#include "fppdl/common/bytes.hpp"
#include "fppdl/common/error.hpp"

namespace fppdl::crypto {
namespace {

constexpr std::size_t kFskBytes = crypto_aead_xchacha20poly1305_ietf_KEYBYTES;
constexpr std::size_t kWrappedKeyBytes =
    crypto_box_PUBLICKEYBYTES + crypto_box_MACBYTES + kFskBytes;

// fsk is single use, so a constant nonce is safe for the symmetric layer.
constexpr std::array<std::uint8_t, crypto_aead_xchacha20poly1305_ietf_NPUBBYTES> kSymNonce{};

std::array<std::uint8_t, crypto_box_NONCEBYTES> wrap_nonce(ByteView ephemeral_pk,
                                                           ByteView recipient_pk) {
  std::array<std::uint8_t, crypto_box_NONCEBYTES> nonce;
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, nonce.size());
  crypto_generichash_update(&st, ephemeral_pk.data(), ephemeral_pk.size());
  crypto_generichash_update(&st, recipient_pk.data(), recipient_pk.size());
  crypto_generichash_final(&st, nonce.data(), nonce.size());
  return nonce;
}

}  // namespace

Bytes OnionPayload::serialize() const {
  ByteWriter w;
  w.blob(wrapped_key);
  w.raw(sym_ciphertext);
  return std::move(w).take();
}

OnionPayload OnionPayload::parse(ByteView bytes) {
  ByteReader r(bytes);
  OnionPayload p;
  p.wrapped_key = r.blob();
  require(p.wrapped_key.size() == kWrappedKeyBytes, ErrorCode::kMalformed,
          "wrapped key has the wrong length");
  const ByteView rest = r.raw(r.remaining());
  require(rest.size() >= crypto_aead_xchacha20poly1305_ietf_ABYTES, ErrorCode::kMalformed,
          "symmetric ciphertext shorter than its tag");
  p.sym_ciphertext.assign(rest.begin(), rest.end());
  return p;
}

OnionPayload onion_wrap(ByteView plaintext, ByteView recipient_pk, Drbg& rng) {
  ensure_sodium();
  require(recipient_pk.size() == crypto_box_PUBLICKEYBYTES, ErrorCode::kInvalidArgument,
          "recipient key must be an X25519 public key");

  std::array<std::uint8_t, kFskBytes> fsk;
  rng.fill(fsk);
  const BoxKeyPair ephemeral = BoxKeyPair::generate(rng);

  OnionPayload out;
  out.wrapped_key.resize(kWrappedKeyBytes);
  std::memcpy(out.wrapped_key.data(), ephemeral.public_key.data(), crypto_box_PUBLICKEYBYTES);
  const auto nonce = wrap_nonce(ephemeral.public_key, recipient_pk);
  require(crypto_box_easy(out.wrapped_key.data() + crypto_box_PUBLICKEYBYTES, fsk.data(),
                          fsk.size(), nonce.data(), recipient_pk.data(),
                          ephemeral.secret_key.data()) == 0,
          ErrorCode::kInvalidArgument, "recipient key rejected");

  out.sym_ciphertext.resize(plaintext.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long written = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      out.sym_ciphertext.data(), &written, plaintext.data(), plaintext.size(),
      out.wrapped_key.data(), out.wrapped_key.size(), nullptr, kSymNonce.data(), fsk.data());
  out.sym_ciphertext.resize(written);
  sodium_memzero(fsk.data(), fsk.size());
  return out;
}

Bytes onion_open(const OnionPayload& payload, ByteView recipient_sk) {
  ensure_sodium();
  require(payload.wrapped_key.size() == kWrappedKeyBytes, ErrorCode::kMalformed,
          "wrapped key has the wrong length");
  const BoxKeyPair recipient = BoxKeyPair::from_secret(recipient_sk);
  const ByteView ephemeral_pk{payload.wrapped_key.data(), crypto_box_PUBLICKEYBYTES};
  const auto nonce = wrap_nonce(ephemeral_pk, recipient.public_key);

  std::array<std::uint8_t, kFskBytes> fsk;
  if (crypto_box_open_easy(fsk.data(), payload.wrapped_key.data() + crypto_box_PUBLICKEYBYTES,
                           crypto_box_MACBYTES + kFskBytes, nonce.data(), ephemeral_pk.data(),
                           recipient.secret_key.data()) != 0) {
    fail(ErrorCode::kKeyUnwrap, "wrapped key does not open under this secret key");
  }

  require(payload.sym_ciphertext.size() >= crypto_aead_xchacha20poly1305_ietf_ABYTES,
          ErrorCode::kMalformed, "symmetric ciphertext shorter than its tag");
  Bytes plain(payload.sym_ciphertext.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long written = 0;
  const int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
      plain.data(), &written, nullptr, payload.sym_ciphertext.data(),
      payload.sym_ciphertext.size(), payload.wrapped_key.data(), payload.wrapped_key.size(),
      kSymNonce.data(), fsk.data());
  sodium_memzero(fsk.data(), fsk.size());
  if (rc != 0) fail(ErrorCode::kAuthentication, "symmetric layer failed authentication");
  plain.resize(written);
  return plain;
}

CipherVector onion_unwrap(ByteView payload, ByteView recipient_sk) {
  const OnionPayload parsed = OnionPayload::parse(payload);
  // A CipherVector header alone is three words.
  require(parsed.sym_ciphertext.size() >= 24 + crypto_aead_xchacha20poly1305_ietf_ABYTES,
          ErrorCode::kMalformed, "onion payload too short for a cipher vector");
  return parse_cipher_vector(onion_open(parsed, recipient_sk));
}

}  // namespace fppdl::crypto
