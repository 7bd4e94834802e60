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

#include "fppdl/crypto/primitives.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>

#include "fppdl/common/bytes.hpp"
#include "fppdl/common/error.hpp"

namespace fppdl::crypto {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    require(sodium_init() >= 0, ErrorCode::kProtocol, "sodium_init failed");
  });
}

Digest sha256(ByteView data) {
  ensure_sodium();
  Digest out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest sha256_pair(const Digest& left, const Digest& right) {
  std::array<std::uint8_t, 64> buf;
  std::memcpy(buf.data(), left.data(), 32);
  std::memcpy(buf.data() + 32, right.data(), 32);
  return sha256({buf.data(), buf.size()});
}

Seed32 expand_seed(std::uint64_t seed, std::uint64_t domain) {
  ensure_sodium();
  ByteWriter w;
  w.raw({reinterpret_cast<const std::uint8_t*>("fppdl-seed"), 10});
  w.u64(seed);
  w.u64(domain);
  Seed32 out;
  crypto_generichash(out.data(), out.size(), w.bytes().data(), w.bytes().size(), nullptr, 0);
  return out;
}

void Drbg::fill(std::span<std::uint8_t> out) {
  ensure_sodium();
  static_assert(randombytes_SEEDBYTES == 32);
  ByteWriter w;
  w.u64(counter_++);
  Seed32 draw_seed;
  crypto_generichash(draw_seed.data(), draw_seed.size(), w.bytes().data(), w.bytes().size(),
                     key_.data(), key_.size());
  randombytes_buf_deterministic(out.data(), out.size(), draw_seed.data());
}

Seed32 Drbg::seed32() {
  Seed32 s;
  fill(s);
  return s;
}

SigningKeyPair SigningKeyPair::generate(Drbg& rng) {
  ensure_sodium();
  Seed32 seed = rng.seed32();
  SigningKeyPair kp;
  kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
  kp.secret_key.resize(crypto_sign_SECRETKEYBYTES);
  crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
  return kp;
}

BoxKeyPair BoxKeyPair::generate(Drbg& rng) {
  ensure_sodium();
  Seed32 seed = rng.seed32();
  BoxKeyPair kp;
  kp.public_key.resize(crypto_box_PUBLICKEYBYTES);
  kp.secret_key.resize(crypto_box_SECRETKEYBYTES);
  crypto_box_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
  return kp;
}

BoxKeyPair BoxKeyPair::from_secret(ByteView secret_key) {
  ensure_sodium();
  require(secret_key.size() == crypto_box_SECRETKEYBYTES, ErrorCode::kKeyUnwrap,
          "bad X25519 secret key length");
  BoxKeyPair kp;
  kp.secret_key.assign(secret_key.begin(), secret_key.end());
  kp.public_key.resize(crypto_box_PUBLICKEYBYTES);
  crypto_scalarmult_base(kp.public_key.data(), kp.secret_key.data());
  return kp;
}

KeyBundle KeyBundle::generate(Drbg& rng) {
  KeyBundle b;
  b.signing = SigningKeyPair::generate(rng);
  b.recipient = BoxKeyPair::generate(rng);
  b.entropy = rng.seed32();
  return b;
}

Bytes sign(ByteView message, ByteView secret_key) {
  ensure_sodium();
  require(secret_key.size() == crypto_sign_SECRETKEYBYTES, ErrorCode::kInvalidArgument,
          "bad Ed25519 secret key length");
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_key.data());
  return sig;
}

bool verify(ByteView message, ByteView signature, ByteView public_key) noexcept {
  if (sodium_init() < 0) return false;
  if (signature.size() != crypto_sign_BYTES || public_key.size() != crypto_sign_PUBLICKEYBYTES) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     public_key.data()) == 0;
}

}  // namespace fppdl::crypto
