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

#ifndef BBCREDS_CRYPTO_HPP
#define BBCREDS_CRYPTO_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

#include "bbcreds/bytes.hpp"

// Thin wrappers over libsodium. Everything above this layer speaks in
// ByteView/ByteArray and never touches sodium directly.
namespace bbcreds::crypto {

inline constexpr std::size_t kHashBytes = 32;
inline constexpr std::size_t kAeadKeyBytes = 32;
inline constexpr std::size_t kAeadNonceBytes = 12;
inline constexpr std::size_t kAeadTagBytes = 16;
inline constexpr std::size_t kSignSeedBytes = 32;
inline constexpr std::size_t kSignPublicBytes = 32;
inline constexpr std::size_t kSignSecretBytes = 64;
inline constexpr std::size_t kSignatureBytes = 64;

using Digest = ByteArray<kHashBytes>;
using AeadKey = ByteArray<kAeadKeyBytes>;
using AeadNonce = ByteArray<kAeadNonceBytes>;

void ensure_initialized();

Digest sha256(ByteView data);

// SHA-256 over label || 0x00 || data. The label gives domain separation
// between the different hashes the protocol stores or derives.
Digest labeled_hash(std::string_view label, ByteView data);

Digest hmac_sha256(ByteView key, ByteView data);

// RFC 5869 HKDF with SHA-256.
Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info,
                  std::size_t out_len);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// ChaCha20-Poly1305 (IETF). Output is ciphertext || 16-byte tag.
Bytes aead_seal(const AeadKey& key, const AeadNonce& nonce,
                ByteView plaintext, ByteView aad);
std::optional<Bytes> aead_open(const AeadKey& key, const AeadNonce& nonce,
                               ByteView sealed, ByteView aad);

struct SigningKeyPair {
  ByteArray<kSignPublicBytes> public_key{};
  ByteArray<kSignSecretBytes> secret_key{};
};

// Ed25519, deterministic signatures.
SigningKeyPair signing_keypair_from_seed(const ByteArray<kSignSeedBytes>& seed);
ByteArray<kSignatureBytes> sign(const ByteArray<kSignSecretBytes>& secret_key,
                                ByteView message);
bool verify(const ByteArray<kSignPublicBytes>& public_key, ByteView message,
            const ByteArray<kSignatureBytes>& signature);

bool constant_time_equal(ByteView a, ByteView b);

// OS randomness; only used to pick a seed when the caller supplied none.
std::uint64_t random_seed();

// Deterministic byte generator: ChaCha20 keystream keyed by
// SHA-256(label, seed). Also a UniformRandomBitGenerator so it can feed
// <random> distributions.
class Drbg {
 public:
  using result_type = std::uint64_t;

  Drbg(std::uint64_t seed, std::string_view label);

  void fill(std::span<std::uint8_t> out);

  template <std::size_t N>
  ByteArray<N> array() {
    ByteArray<N> out{};
    fill(out);
    return out;
  }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double next_unit();

  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

 private:
  void refill();

  AeadKey key_{};
  std::uint32_t counter_ = 0;
  ByteArray<64> block_{};
  std::size_t used_ = 64;
};

// SplitMix64 finalizer over (seed, label); used to derive independent
// sub-seeds from one user-facing seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace bbcreds::crypto

#endif  // BBCREDS_CRYPTO_HPP
