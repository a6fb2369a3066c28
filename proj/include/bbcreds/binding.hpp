/*
 * Copyright 2026 The bbcreds Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BBCREDS_BINDING_HPP
#define BBCREDS_BINDING_HPP

#include <cstdint>
#include <optional>
#include <string_view>

#include "bbcreds/bytes.hpp"
#include "bbcreds/credential.hpp"
#include "bbcreds/crypto.hpp"
#include "bbcreds/fextract.hpp"

namespace bbcreds {

inline constexpr std::size_t kSecretBytes = 32;
inline constexpr std::size_t kDigestBytes = 32;
inline constexpr std::uint8_t kBoundAadVersion = 1;

inline constexpr std::string_view kKeyHashLabel = "bbcreds/keyhash/v1";
inline constexpr std::string_view kSketchKeyLabel = "bbcreds/sketch/v1";
inline constexpr std::string_view kCredKeyLabel = "bbcreds/cred/v1";
inline constexpr std::string_view kOnewayLabel = "bbcreds/oneway/v1";

struct StableSecret {
  ByteArray<kSecretBytes> secret{};
  friend bool operator==(const StableSecret&, const StableSecret&) = default;
};

enum class SketchVariant : std::uint8_t { Xor = 1, Encrypted = 2 };

std::string_view to_string(SketchVariant v);

// Public value linking StableKey and StableSecret.
//   Xor:       payload = key XOR secret (32 bytes)
//   Encrypted: payload = nonce(12) || AEAD(KDF(key), secret) (60 bytes)
struct Sketch {
  SketchVariant variant = SketchVariant::Xor;
  Bytes payload;

  static std::size_t payload_size(SketchVariant v);
  bool well_formed() const { return payload.size() == payload_size(variant); }

  friend bool operator==(const Sketch&, const Sketch&) = default;
};

struct KeyDigest {
  ByteArray<kDigestBytes> digest{};
  friend bool operator==(const KeyDigest&, const KeyDigest&) = default;
};

// AEAD ciphertext of the canonical AgeCred. aad_version is authenticated.
struct BoundCredential {
  std::uint8_t aad_version = kBoundAadVersion;
  crypto::AeadNonce nonce{};
  Bytes ciphertext;

  friend bool operator==(const BoundCredential&,
                         const BoundCredential&) = default;
};

struct EnrollmentBinding {
  Sketch sketch;
  KeyDigest digest;
  BoundCredential bound;
};

// Exposes enrollment-time secrets to test code. Production callers pass
// nullptr; nothing else ever retains these values.
struct BindingTrace {
  StableSecret secret;
};

KeyDigest hash_key(const StableKey& k);

EnrollmentBinding bind_enroll(const StableKey& key, const AgeCred& cred,
                              SketchVariant variant, std::uint64_t rng_seed,
                              BindingTrace* trace = nullptr);

enum class AuthFailure {
  HashMismatch,
  SketchOpenFailed,
  DecryptFailed,
  MalformedCredential,
};

std::string_view to_string(AuthFailure f);

// Stages run in order: key hash check, secret recovery from the sketch,
// credential decryption, credential decoding. The first failure is
// reported.
Expected<AgeCred, AuthFailure> unbind_auth(const StableKey& key_candidate,
                                           const Sketch& sketch,
                                           const KeyDigest& digest,
                                           const BoundCredential& bound);

// One-way credential token Hash(secret XOR sketch) for XOR sketches.
ByteArray<kDigestBytes> bind_oneway(const StableSecret& secret,
                                    const Sketch& sketch);

// Secret recovery only (no hash gate): key XOR payload, or AEAD-open.
std::optional<StableSecret> recover_secret(const StableKey& key,
                                           const Sketch& sketch);

// variant(1) || length(4) || payload
Bytes encode_sketch(const Sketch& s);
std::optional<Sketch> decode_sketch(ByteView bytes);

// aad_version(1) || nonce(12) || length(4) || ciphertext
Bytes encode_bound(const BoundCredential& b);
std::optional<BoundCredential> decode_bound(ByteView bytes);

}  // namespace bbcreds

#endif  // BBCREDS_BINDING_HPP
