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

#ifndef BBCREDS_CREDENTIAL_HPP
#define BBCREDS_CREDENTIAL_HPP

#include <cstdint>
#include <optional>
#include <string_view>

#include "bbcreds/bytes.hpp"
#include "bbcreds/crypto.hpp"

namespace bbcreds {

inline constexpr std::uint8_t kAgeCredVersion = 1;
inline constexpr std::size_t kIdBytes = 16;
inline constexpr std::size_t kAgeCredSignedBytes = 50;
inline constexpr std::size_t kAgeCredBytes = 114;

using PublicKey = ByteArray<crypto::kSignPublicBytes>;
using Signature = ByteArray<crypto::kSignatureBytes>;

// Signed age-over attestation. Canonical layout (big-endian):
//   version(1) issuer_id(16) subject_id(16) age_over(1)
//   issued_at(8) expires_at(8) signature(64)
// The signature covers the first 50 bytes.
struct AgeCred {
  std::uint8_t version = kAgeCredVersion;
  ByteArray<kIdBytes> issuer_id{};
  ByteArray<kIdBytes> subject_id{};
  std::uint8_t age_over = 0;
  std::uint64_t issued_at = 0;
  std::uint64_t expires_at = 0;
  Signature signature{};

  friend bool operator==(const AgeCred&, const AgeCred&) = default;
};

class IssuerKeyPair {
 public:
  static IssuerKeyPair from_seed(const ByteArray<crypto::kSignSeedBytes>& seed);
  static IssuerKeyPair generate(std::uint64_t seed);

  const PublicKey& public_key() const { return kp_.public_key; }
  const ByteArray<crypto::kSignSeedBytes>& seed() const { return seed_; }
  // Derived from the public key; stamped into every credential.
  ByteArray<kIdBytes> issuer_id() const;

  Signature sign(ByteView message) const;

 private:
  ByteArray<crypto::kSignSeedBytes> seed_{};
  crypto::SigningKeyPair kp_;
};

Bytes agecred_signed_bytes(const AgeCred& c);
Bytes encode_agecred(const AgeCred& c);
// Structural decode only; signature validity is verify_agecred's job.
std::optional<AgeCred> decode_agecred(ByteView bytes);

// Throws ConfigError for age_over outside (0, 150) or zero validity.
AgeCred issue_agecred(const IssuerKeyPair& keys,
                      const ByteArray<kIdBytes>& subject_id, int age_over,
                      std::uint64_t issued_at, std::uint64_t validity_seconds);

enum class RejectReason { BadSignature, Expired, NotYetValid, ThresholdNotMet };

std::string_view to_string(RejectReason r);

struct Verdict {
  bool accepted = false;
  RejectReason reason = RejectReason::BadSignature;  // meaningful if rejected

  static Verdict accept() { return {true, RejectReason::BadSignature}; }
  static Verdict reject(RejectReason r) { return {false, r}; }
};

// Checks in order: signature, then issued_at <= now < expires_at, then
// age_over >= required_age_over.
Verdict verify_agecred(const AgeCred& c, const PublicKey& issuer_public,
                       std::uint64_t now, int required_age_over);

}  // namespace bbcreds

#endif  // BBCREDS_CREDENTIAL_HPP
