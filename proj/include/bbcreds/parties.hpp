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

#ifndef BBCREDS_PARTIES_HPP
#define BBCREDS_PARTIES_HPP

#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "bbcreds/binding.hpp"
#include "bbcreds/credential.hpp"
#include "bbcreds/fextract.hpp"
#include "bbcreds/store.hpp"
#include "bbcreds/synthbio.hpp"

namespace bbcreds {

// ---------------------------------------------------------------------------
// Calendar helpers (proleptic Gregorian, UTC)

struct CivilDate {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  static std::optional<CivilDate> parse(std::string_view iso);  // YYYY-MM-DD
  static CivilDate from_unix(std::uint64_t seconds);
  std::string to_string() const;
  bool valid() const;

  friend auto operator<=>(const CivilDate&, const CivilDate&) = default;
};

// Completed years between `dob` and the UTC date of `now`. A birthday
// counts from the start of that day; a 29 February birthday is reached on
// 1 March in non-leap years.
int age_in_years(const CivilDate& dob, std::uint64_t now);

// ---------------------------------------------------------------------------
// Liveness

struct LivenessPolicy {
  enum class Mode { AlwaysPass, AlwaysFail, SeededRandom };
  Mode mode = Mode::AlwaysPass;
  double rate = 1.0;  // pass probability, SeededRandom only
  std::uint64_t seed = 0;

  static LivenessPolicy always_pass() { return {Mode::AlwaysPass, 1.0, 0}; }
  static LivenessPolicy always_fail() { return {Mode::AlwaysFail, 0.0, 0}; }
  static LivenessPolicy seeded_random(double rate, std::uint64_t seed);
};

struct LivenessResult {
  bool passed = false;
  std::string detail;
};

LivenessResult liveness_check(const LivenessPolicy& policy);

// ---------------------------------------------------------------------------
// Issuance messages

enum class EvidenceKind : std::uint8_t {
  MockDateOfBirth = 1,  // payload: ASCII "YYYY-MM-DD"
  AlwaysApprove = 2,    // payload: empty
};

struct Evidence {
  EvidenceKind kind = EvidenceKind::AlwaysApprove;
  Bytes payload;

  static Evidence date_of_birth(const CivilDate& dob);
  static Evidence always_approve() { return {}; }

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct IssuanceRequest {
  ByteArray<kIdBytes> subject_id{};
  Evidence evidence;
  ByteArray<16> request_nonce{};

  friend bool operator==(const IssuanceRequest&,
                         const IssuanceRequest&) = default;
};

enum class DenialReason : std::uint8_t { UnderAge = 1, BadEvidence = 2, Replay = 3 };

std::string_view to_string(DenialReason r);

struct IssuanceResponse {
  enum class Status : std::uint8_t { Issued = 0, Denied = 1 };
  Status status = Status::Denied;
  DenialReason reason = DenialReason::BadEvidence;  // meaningful if Denied
  std::optional<AgeCred> credential;                // present iff Issued

  static IssuanceResponse issued(AgeCred c) {
    return {Status::Issued, DenialReason::BadEvidence, std::move(c)};
  }
  static IssuanceResponse denied(DenialReason r) {
    return {Status::Denied, r, std::nullopt};
  }

  friend bool operator==(const IssuanceResponse&,
                         const IssuanceResponse&) = default;
};

inline constexpr std::uint8_t kWireVersion = 1;

// version(1) || subject_id(16) || evidence_tag(1) || evidence_len(2) ||
// evidence || nonce(16)
Bytes encode_request(const IssuanceRequest& req);
std::optional<IssuanceRequest> decode_request(ByteView bytes);

// version(1) || status(1) || [AgeCred(114) when issued]
// status: 0 issued, otherwise the DenialReason value.
Bytes encode_response(const IssuanceResponse& resp);
std::optional<IssuanceResponse> decode_response(ByteView bytes);

// 4-byte big-endian length prefix.
Bytes frame(ByteView message);
std::optional<Bytes> unframe(ByteView framed);

// ---------------------------------------------------------------------------
// Attribute service provider

struct AgePolicy {
  int threshold = 18;
  std::uint64_t validity_seconds = 365ull * 24 * 3600;
};

// Safe for concurrent requests; the replay set is its only mutable state.
class AttributeServiceProvider {
 public:
  AttributeServiceProvider(IssuerKeyPair keys, AgePolicy policy)
      : keys_(std::move(keys)), policy_(policy) {}

  IssuanceResponse handle(const IssuanceRequest& req, std::uint64_t now);

  const PublicKey& issuer_public() const { return keys_.public_key(); }
  const AgePolicy& policy() const { return policy_; }

 private:
  IssuerKeyPair keys_;
  AgePolicy policy_;
  std::mutex mu_;
  std::set<ByteArray<16>> seen_nonces_;
};

IssuanceResponse asp_handle_issuance(AttributeServiceProvider& asp,
                                     const IssuanceRequest& req,
                                     std::uint64_t now);

// How the device reaches the ASP. Only IssuanceRequest fields ever cross
// this boundary.
class IssuanceChannel {
 public:
  virtual ~IssuanceChannel() = default;
  virtual IssuanceResponse request_issuance(const IssuanceRequest& req) = 0;
  virtual PublicKey issuer_public() const = 0;
};

class InProcessAspChannel : public IssuanceChannel {
 public:
  InProcessAspChannel(AttributeServiceProvider& asp, std::uint64_t now)
      : asp_(asp), now_(now) {}

  IssuanceResponse request_issuance(const IssuanceRequest& req) override {
    return asp_.handle(req, now_);
  }
  PublicKey issuer_public() const override { return asp_.issuer_public(); }

 private:
  AttributeServiceProvider& asp_;
  std::uint64_t now_;
};

// ASP side of the framed byte transport.
class AspWireEndpoint {
 public:
  AspWireEndpoint(AttributeServiceProvider& asp, std::uint64_t now)
      : asp_(asp), now_(now) {}
  // Undecodable frames get a BadEvidence denial.
  Bytes handle_frame(ByteView framed_request);

 private:
  AttributeServiceProvider& asp_;
  std::uint64_t now_;
};

// Device side: requests travel as framed wire bytes through the endpoint,
// so the canonical format is exercised end to end.
class WireAspChannel : public IssuanceChannel {
 public:
  WireAspChannel(AspWireEndpoint& endpoint, PublicKey issuer_public)
      : endpoint_(endpoint), issuer_public_(issuer_public) {}

  IssuanceResponse request_issuance(const IssuanceRequest& req) override;
  PublicKey issuer_public() const override { return issuer_public_; }

 private:
  AspWireEndpoint& endpoint_;
  PublicKey issuer_public_;
};

// ---------------------------------------------------------------------------
// Device

inline constexpr double kSigmaDefault = 0.003;

struct ProtocolConfig {
  std::size_t dim = kDefaultDim;
  std::size_t code_n = 511;
  std::size_t code_t = 30;
  SketchVariant variant = SketchVariant::Xor;
  double capture_sigma = kSigmaDefault;  // noise of the enrollment capture
  LivenessPolicy liveness = LivenessPolicy::always_pass();

  const BchCode& code() const { return BchCode::shared(code_n, code_t); }
};

struct EnrollFailure {
  enum class Kind { LivenessFailed, IssuanceDenied, UntrustedCredential };
  Kind kind;
  DenialReason denial = DenialReason::BadEvidence;  // for IssuanceDenied
};

std::string_view to_string(EnrollFailure::Kind k);

// Test hook: the enrollment-time secrets. Never filled by production paths.
struct EnrollmentTrace {
  StableKey key;
  StableSecret secret;
  AgeCred credential;
};

Expected<DeviceRecord, EnrollFailure> device_enroll(
    const IdentityProfile& profile, IssuanceChannel& asp,
    const ProtocolConfig& cfg, const Evidence& evidence,
    std::uint64_t rng_seed, EnrollmentTrace* trace = nullptr);

enum class DeviceAuthFailure {
  LivenessFailed,
  ExtractFailed,
  HashMismatch,
  SketchOpenFailed,
  DecryptFailed,
  MalformedCredential,
};

std::string_view to_string(DeviceAuthFailure f);

Expected<AgeCred, DeviceAuthFailure> device_authenticate(
    const Embedding& sample, const DeviceRecord& record,
    const LivenessPolicy& liveness);

// ---------------------------------------------------------------------------
// Relying party

struct AccessDecision {
  bool granted = false;
  RejectReason reason = RejectReason::BadSignature;  // meaningful if denied
};

AccessDecision rp_check_access(const AgeCred& cred,
                               const PublicKey& issuer_public,
                               std::uint64_t now, int required_age_over);

}  // namespace bbcreds

#endif  // BBCREDS_PARTIES_HPP
