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

#include "bbcreds/credential.hpp"

#include <string>

namespace bbcreds {

IssuerKeyPair IssuerKeyPair::from_seed(
    const ByteArray<crypto::kSignSeedBytes>& seed) {
  IssuerKeyPair out;
  out.seed_ = seed;
  out.kp_ = crypto::signing_keypair_from_seed(seed);
  return out;
}

IssuerKeyPair IssuerKeyPair::generate(std::uint64_t seed) {
  crypto::Drbg rng(seed, "bbcreds/issuer/keygen");
  return from_seed(rng.array<crypto::kSignSeedBytes>());
}

ByteArray<kIdBytes> IssuerKeyPair::issuer_id() const {
  auto d = crypto::labeled_hash("bbcreds/issuer-id/v1", kp_.public_key);
  ByteArray<kIdBytes> id{};
  std::copy_n(d.begin(), kIdBytes, id.begin());
  return id;
}

Signature IssuerKeyPair::sign(ByteView message) const {
  return crypto::sign(kp_.secret_key, message);
}

Bytes agecred_signed_bytes(const AgeCred& c) {
  ByteWriter w;
  w.u8(c.version);
  w.bytes(c.issuer_id);
  w.bytes(c.subject_id);
  w.u8(c.age_over);
  w.u64(c.issued_at);
  w.u64(c.expires_at);
  return std::move(w).take();
}

Bytes encode_agecred(const AgeCred& c) {
  Bytes out = agecred_signed_bytes(c);
  out.insert(out.end(), c.signature.begin(), c.signature.end());
  return out;
}

std::optional<AgeCred> decode_agecred(ByteView bytes) {
  if (bytes.size() != kAgeCredBytes) return std::nullopt;
  ByteReader r(bytes);
  AgeCred c;
  c.version = *r.u8();
  c.issuer_id = *r.array<kIdBytes>();
  c.subject_id = *r.array<kIdBytes>();
  c.age_over = *r.u8();
  c.issued_at = *r.u64();
  c.expires_at = *r.u64();
  c.signature = *r.array<crypto::kSignatureBytes>();
  if (c.version != kAgeCredVersion || c.expires_at <= c.issued_at)
    return std::nullopt;
  return c;
}

AgeCred issue_agecred(const IssuerKeyPair& keys,
                      const ByteArray<kIdBytes>& subject_id, int age_over,
                      std::uint64_t issued_at,
                      std::uint64_t validity_seconds) {
  if (age_over <= 0 || age_over >= 150)
    throw ConfigError("age_over must be in (0, 150), got " +
                      std::to_string(age_over));
  if (validity_seconds == 0) throw ConfigError("validity must be positive");
  if (issued_at > UINT64_MAX - validity_seconds)
    throw ConfigError("validity window overflows");

  AgeCred c;
  c.issuer_id = keys.issuer_id();
  c.subject_id = subject_id;
  c.age_over = static_cast<std::uint8_t>(age_over);
  c.issued_at = issued_at;
  c.expires_at = issued_at + validity_seconds;
  c.signature = keys.sign(agecred_signed_bytes(c));
  return c;
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::BadSignature: return "BadSignature";
    case RejectReason::Expired: return "Expired";
    case RejectReason::NotYetValid: return "NotYetValid";
    case RejectReason::ThresholdNotMet: return "ThresholdNotMet";
  }
  return "Unknown";
}

Verdict verify_agecred(const AgeCred& c, const PublicKey& issuer_public,
                       std::uint64_t now, int required_age_over) {
  if (!crypto::verify(issuer_public, agecred_signed_bytes(c), c.signature))
    return Verdict::reject(RejectReason::BadSignature);
  if (now < c.issued_at) return Verdict::reject(RejectReason::NotYetValid);
  if (now >= c.expires_at) return Verdict::reject(RejectReason::Expired);
  if (static_cast<int>(c.age_over) < required_age_over)
    return Verdict::reject(RejectReason::ThresholdNotMet);
  return Verdict::accept();
}

}  // namespace bbcreds
