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

#include "bbcreds/crypto.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace bbcreds::crypto {

void ensure_initialized() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
  });
}

Digest sha256(ByteView data) {
  ensure_initialized();
  Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest labeled_hash(std::string_view label, ByteView data) {
  ensure_initialized();
  crypto_hash_sha256_state st;
  crypto_hash_sha256_init(&st);
  auto l = as_bytes(label);
  const std::uint8_t sep = 0;
  crypto_hash_sha256_update(&st, l.data(), l.size());
  crypto_hash_sha256_update(&st, &sep, 1);
  crypto_hash_sha256_update(&st, data.data(), data.size());
  Digest out{};
  crypto_hash_sha256_final(&st, out.data());
  return out;
}

Digest hmac_sha256(ByteView key, ByteView data) {
  ensure_initialized();
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, data.data(), data.size());
  Digest out{};
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info,
                  std::size_t out_len) {
  if (out_len > 255 * kHashBytes)
    throw ContractError("hkdf: output length too large");
  const Digest zero_salt{};
  Digest prk = hmac_sha256(salt.empty() ? ByteView(zero_salt) : salt, ikm);

  Bytes out;
  out.reserve(out_len);
  Bytes block;
  for (std::uint8_t counter = 1; out.size() < out_len; ++counter) {
    Bytes input(block);
    input.insert(input.end(), info.begin(), info.end());
    input.push_back(counter);
    auto t = hmac_sha256(prk, input);
    block.assign(t.begin(), t.end());
    std::size_t take = std::min(out_len - out.size(), block.size());
    out.insert(out.end(), block.begin(), block.begin() + take);
  }
  sodium_memzero(prk.data(), prk.size());
  return out;
}

Bytes aead_seal(const AeadKey& key, const AeadNonce& nonce,
                ByteView plaintext, ByteView aad) {
  ensure_initialized();
  Bytes out(plaintext.size() + kAeadTagBytes);
  unsigned long long out_len = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(
      out.data(), &out_len, plaintext.data(), plaintext.size(), aad.data(),
      aad.size(), nullptr, nonce.data(), key.data());
  out.resize(out_len);
  return out;
}

std::optional<Bytes> aead_open(const AeadKey& key, const AeadNonce& nonce,
                               ByteView sealed, ByteView aad) {
  ensure_initialized();
  if (sealed.size() < kAeadTagBytes) return std::nullopt;
  Bytes out(sealed.size() - kAeadTagBytes);
  unsigned long long out_len = 0;
  if (crypto_aead_chacha20poly1305_ietf_decrypt(
          out.data(), &out_len, nullptr, sealed.data(), sealed.size(),
          aad.data(), aad.size(), nonce.data(), key.data()) != 0) {
    return std::nullopt;
  }
  out.resize(out_len);
  return out;
}

SigningKeyPair signing_keypair_from_seed(
    const ByteArray<kSignSeedBytes>& seed) {
  ensure_initialized();
  SigningKeyPair kp;
  crypto_sign_ed25519_seed_keypair(kp.public_key.data(), kp.secret_key.data(),
                                   seed.data());
  return kp;
}

ByteArray<kSignatureBytes> sign(const ByteArray<kSignSecretBytes>& secret_key,
                                ByteView message) {
  ensure_initialized();
  ByteArray<kSignatureBytes> sig{};
  crypto_sign_ed25519_detached(sig.data(), nullptr, message.data(),
                               message.size(), secret_key.data());
  return sig;
}

bool verify(const ByteArray<kSignPublicBytes>& public_key, ByteView message,
            const ByteArray<kSignatureBytes>& signature) {
  ensure_initialized();
  return crypto_sign_ed25519_verify_detached(signature.data(), message.data(),
                                             message.size(),
                                             public_key.data()) == 0;
}

bool constant_time_equal(ByteView a, ByteView b) {
  ensure_initialized();
  if (a.size() != b.size()) return false;
  return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

std::uint64_t random_seed() {
  ensure_initialized();
  std::uint64_t v = 0;
  randombytes_buf(&v, sizeof v);
  return v;
}

Drbg::Drbg(std::uint64_t seed, std::string_view label) {
  ByteWriter w;
  w.u64(seed);
  key_ = labeled_hash(label, w.data());
}

void Drbg::refill() {
  static const ByteArray<64> kZero{};
  static const AeadNonce kNonce{};
  crypto_stream_chacha20_ietf_xor_ic(block_.data(), kZero.data(), kZero.size(),
                                     kNonce.data(), counter_++, key_.data());
  used_ = 0;
}

void Drbg::fill(std::span<std::uint8_t> out) {
  ensure_initialized();
  for (auto& b : out) {
    if (used_ == block_.size()) refill();
    b = block_[used_++];
  }
}

std::uint64_t Drbg::next_u64() {
  ByteArray<8> raw{};
  fill(raw);
  std::uint64_t v = 0;
  for (auto b : raw) v = (v << 8) | b;
  return v;
}

double Drbg::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label, folded into the seed, then SplitMix64.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace bbcreds::crypto
