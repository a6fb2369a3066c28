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

#include "bbcreds/binding.hpp"

#include <sodium.h>

namespace bbcreds {

namespace {

crypto::AeadKey derive_working_key(ByteView material, std::string_view label) {
  auto okm = crypto::hkdf_sha256(material, {}, crypto::as_bytes(label),
                                 crypto::kAeadKeyBytes);
  crypto::AeadKey k{};
  std::copy(okm.begin(), okm.end(), k.begin());
  sodium_memzero(okm.data(), okm.size());
  return k;
}

Bytes sketch_aad(SketchVariant v) {
  return {static_cast<std::uint8_t>(v)};
}

}  // namespace

std::string_view to_string(SketchVariant v) {
  switch (v) {
    case SketchVariant::Xor: return "xor";
    case SketchVariant::Encrypted: return "encrypted";
  }
  return "unknown";
}

std::size_t Sketch::payload_size(SketchVariant v) {
  switch (v) {
    case SketchVariant::Xor: return kSecretBytes;
    case SketchVariant::Encrypted:
      return crypto::kAeadNonceBytes + kSecretBytes + crypto::kAeadTagBytes;
  }
  return 0;
}

std::string_view to_string(AuthFailure f) {
  switch (f) {
    case AuthFailure::HashMismatch: return "HashMismatch";
    case AuthFailure::SketchOpenFailed: return "SketchOpenFailed";
    case AuthFailure::DecryptFailed: return "DecryptFailed";
    case AuthFailure::MalformedCredential: return "MalformedCredential";
  }
  return "Unknown";
}

KeyDigest hash_key(const StableKey& k) {
  return {crypto::labeled_hash(kKeyHashLabel, k.key)};
}

EnrollmentBinding bind_enroll(const StableKey& key, const AgeCred& cred,
                              SketchVariant variant, std::uint64_t rng_seed,
                              BindingTrace* trace) {
  crypto::Drbg rng(rng_seed, "bbcreds/bind/enroll");
  StableSecret secret{rng.array<kSecretBytes>()};

  EnrollmentBinding out;
  out.digest = hash_key(key);
  out.sketch.variant = variant;
  switch (variant) {
    case SketchVariant::Xor: {
      auto pad = xor_arrays(key.key, secret.secret);
      out.sketch.payload.assign(pad.begin(), pad.end());
      break;
    }
    case SketchVariant::Encrypted: {
      auto nonce = rng.array<crypto::kAeadNonceBytes>();
      auto sketch_key = derive_working_key(key.key, kSketchKeyLabel);
      auto sealed = crypto::aead_seal(sketch_key, nonce, secret.secret,
                                      sketch_aad(variant));
      sodium_memzero(sketch_key.data(), sketch_key.size());
      out.sketch.payload.assign(nonce.begin(), nonce.end());
      out.sketch.payload.insert(out.sketch.payload.end(), sealed.begin(),
                                sealed.end());
      break;
    }
    default:
      throw ContractError("bind_enroll: unknown sketch variant");
  }

  out.bound.aad_version = kBoundAadVersion;
  out.bound.nonce = rng.array<crypto::kAeadNonceBytes>();
  auto cred_key = derive_working_key(secret.secret, kCredKeyLabel);
  const Bytes aad{out.bound.aad_version};
  out.bound.ciphertext =
      crypto::aead_seal(cred_key, out.bound.nonce, encode_agecred(cred), aad);
  sodium_memzero(cred_key.data(), cred_key.size());

  if (trace) trace->secret = secret;
  sodium_memzero(secret.secret.data(), secret.secret.size());
  return out;
}

std::optional<StableSecret> recover_secret(const StableKey& key,
                                           const Sketch& sketch) {
  if (!sketch.well_formed()) return std::nullopt;
  StableSecret s;
  if (sketch.variant == SketchVariant::Xor) {
    for (std::size_t i = 0; i < kSecretBytes; ++i)
      s.secret[i] = key.key[i] ^ sketch.payload[i];
    return s;
  }
  crypto::AeadNonce nonce{};
  std::copy_n(sketch.payload.begin(), nonce.size(), nonce.begin());
  ByteView sealed(sketch.payload.data() + nonce.size(),
                  sketch.payload.size() - nonce.size());
  auto sketch_key = derive_working_key(key.key, kSketchKeyLabel);
  auto opened =
      crypto::aead_open(sketch_key, nonce, sealed, sketch_aad(sketch.variant));
  sodium_memzero(sketch_key.data(), sketch_key.size());
  if (!opened || opened->size() != kSecretBytes) return std::nullopt;
  std::copy(opened->begin(), opened->end(), s.secret.begin());
  sodium_memzero(opened->data(), opened->size());
  return s;
}

Expected<AgeCred, AuthFailure> unbind_auth(const StableKey& key_candidate,
                                           const Sketch& sketch,
                                           const KeyDigest& digest,
                                           const BoundCredential& bound) {
  if (!crypto::constant_time_equal(hash_key(key_candidate).digest,
                                   digest.digest))
    return AuthFailure::HashMismatch;

  auto secret = recover_secret(key_candidate, sketch);
  if (!secret) return AuthFailure::SketchOpenFailed;

  auto cred_key = derive_working_key(secret->secret, kCredKeyLabel);
  sodium_memzero(secret->secret.data(), secret->secret.size());
  const Bytes aad{bound.aad_version};
  auto plain = crypto::aead_open(cred_key, bound.nonce, bound.ciphertext, aad);
  sodium_memzero(cred_key.data(), cred_key.size());
  if (!plain) return AuthFailure::DecryptFailed;

  auto cred = decode_agecred(*plain);
  if (!cred) return AuthFailure::MalformedCredential;
  return *cred;
}

ByteArray<kDigestBytes> bind_oneway(const StableSecret& secret,
                                    const Sketch& sketch) {
  if (sketch.variant != SketchVariant::Xor)
    throw ContractError("bind_oneway requires an XOR sketch");
  if (!sketch.well_formed())
    throw ContractError("bind_oneway: malformed sketch payload");
  ByteArray<kSecretBytes> mixed{};
  for (std::size_t i = 0; i < kSecretBytes; ++i)
    mixed[i] = secret.secret[i] ^ sketch.payload[i];
  auto out = crypto::labeled_hash(kOnewayLabel, mixed);
  sodium_memzero(mixed.data(), mixed.size());
  return out;
}

Bytes encode_sketch(const Sketch& s) {
  if (!s.well_formed()) throw ContractError("sketch: payload size mismatch");
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(s.variant));
  w.u32(static_cast<std::uint32_t>(s.payload.size()));
  w.bytes(s.payload);
  return std::move(w).take();
}

std::optional<Sketch> decode_sketch(ByteView bytes) {
  ByteReader r(bytes);
  auto variant = r.u8();
  auto len = r.u32();
  if (!variant || !len) return std::nullopt;
  if (*variant != static_cast<std::uint8_t>(SketchVariant::Xor) &&
      *variant != static_cast<std::uint8_t>(SketchVariant::Encrypted))
    return std::nullopt;
  auto payload = r.bytes(*len);
  if (!payload || !r.at_end()) return std::nullopt;
  Sketch s{static_cast<SketchVariant>(*variant),
           Bytes(payload->begin(), payload->end())};
  if (!s.well_formed()) return std::nullopt;
  return s;
}

Bytes encode_bound(const BoundCredential& b) {
  ByteWriter w;
  w.u8(b.aad_version);
  w.bytes(b.nonce);
  w.u32(static_cast<std::uint32_t>(b.ciphertext.size()));
  w.bytes(b.ciphertext);
  return std::move(w).take();
}

std::optional<BoundCredential> decode_bound(ByteView bytes) {
  ByteReader r(bytes);
  auto version = r.u8();
  auto nonce = r.array<crypto::kAeadNonceBytes>();
  auto len = r.u32();
  if (!version || !nonce || !len) return std::nullopt;
  auto ct = r.bytes(*len);
  if (!ct || !r.at_end()) return std::nullopt;
  if (ct->size() != kAgeCredBytes + crypto::kAeadTagBytes) return std::nullopt;
  return BoundCredential{*version, *nonce, Bytes(ct->begin(), ct->end())};
}

}  // namespace bbcreds
