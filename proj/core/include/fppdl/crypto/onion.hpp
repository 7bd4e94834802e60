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

#include "fppdl/common/types.hpp"
#include "fppdl/crypto/keystream.hpp"
#include "fppdl/crypto/primitives.hpp"

namespace fppdl::crypto {

// Layers two and three wrapped around a serialized CipherVector.
//   wrapped_key    = ephemeral X25519 pk || crypto_box(fsk) to the recipient
//   sym_ciphertext = XChaCha20-Poly1305(fsk, plaintext, ad = wrapped_key)
struct OnionPayload {
  Bytes wrapped_key;
  Bytes sym_ciphertext;

  // [u32 wrapped_key length][wrapped_key][sym_ciphertext]
  Bytes serialize() const;
  // Throws kMalformed on truncation or impossible lengths.
  static OnionPayload parse(ByteView bytes);
};

// fsk and the ephemeral key are drawn from rng; callers must not share an
// rng state between runs that should produce distinct keys.
OnionPayload onion_wrap(ByteView plaintext, ByteView recipient_pk, Drbg& rng);

// kKeyUnwrap when the wrapped key does not open under recipient_sk,
// kAuthentication when the symmetric layer fails its tag check.
Bytes onion_open(const OnionPayload& payload, ByteView recipient_sk);

// Full unwrap to the layer-1 ciphertext. Round ids are not checked here.
CipherVector onion_unwrap(ByteView payload, ByteView recipient_sk);

}  // namespace fppdl::crypto
