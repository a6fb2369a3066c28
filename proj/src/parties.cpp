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

#include "bbcreds/parties.hpp"

#include <cmath>
#include <cstdio>

#include "bbcreds/crypto.hpp"
#include "bbcreds/quantize.hpp"

namespace bbcreds {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(int y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

CivilDate civil_from_days(long long z) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const long long doe = z - era * 146097;
  const long long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const long long mp = (5 * doy + 2) / 153;
  const unsigned d = static_cast<unsigned>(doy - (153 * mp + 2) / 5 + 1);
  const unsigned m = static_cast<unsigned>(mp < 10 ? mp + 3 : mp - 9);
  return {static_cast<int>(yoe + era * 400 + (m <= 2 ? 1 : 0)), m, d};
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<CivilDate> CivilDate::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t from, std::size_t count) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) {
      if (iso[i] < '0' || iso[i] > '9') return std::nullopt;
      v = v * 10 + (iso[i] - '0');
    }
    return v;
  };
  auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  CivilDate out{*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d)};
  if (!out.valid()) return std::nullopt;
  return out;
}

CivilDate CivilDate::from_unix(std::uint64_t seconds) {
  return civil_from_days(static_cast<long long>(seconds / 86400));
}

std::string CivilDate::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

bool CivilDate::valid() const {
  return year >= 0 && year <= 9999 && month >= 1 && month <= 12 && day >= 1 &&
         day <= days_in_month(year, month);
}

int age_in_years(const CivilDate& dob, std::uint64_t now) {
  const CivilDate today = CivilDate::from_unix(now);
  int age = today.year - dob.year;
  if (today.month < dob.month ||
      (today.month == dob.month && today.day < dob.day))
    --age;
  return age;
}

// ---------------------------------------------------------------------------

LivenessPolicy LivenessPolicy::seeded_random(double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw ConfigError("liveness rate must be in [0, 1]");
  return {Mode::SeededRandom, rate, seed};
}

LivenessResult liveness_check(const LivenessPolicy& policy) {
  switch (policy.mode) {
    case LivenessPolicy::Mode::AlwaysPass:
      return {true, "mock: always pass"};
    case LivenessPolicy::Mode::AlwaysFail:
      return {false, "mock: presentation attack suspected"};
    case LivenessPolicy::Mode::SeededRandom: {
      crypto::Drbg rng(policy.seed, "bbcreds/liveness");
      bool passed = rng.next_unit() < policy.rate;
      return {passed, passed ? "mock: live subject" : "mock: liveness rejected"};
    }
  }
  return {false, "unknown policy"};
}

// ---------------------------------------------------------------------------

Evidence Evidence::date_of_birth(const CivilDate& dob) {
  auto s = dob.to_string();
  return {EvidenceKind::MockDateOfBirth, Bytes(s.begin(), s.end())};
}

std::string_view to_string(DenialReason r) {
  switch (r) {
    case DenialReason::UnderAge: return "UnderAge";
    case DenialReason::BadEvidence: return "BadEvidence";
    case DenialReason::Replay: return "Replay";
  }
  return "Unknown";
}

Bytes encode_request(const IssuanceRequest& req) {
  if (req.evidence.payload.size() > 0xffff)
    throw ContractError("evidence payload exceeds 65535 bytes");
  ByteWriter w;
  w.u8(kWireVersion);
  w.bytes(req.subject_id);
  w.u8(static_cast<std::uint8_t>(req.evidence.kind));
  w.u16(static_cast<std::uint16_t>(req.evidence.payload.size()));
  w.bytes(req.evidence.payload);
  w.bytes(req.request_nonce);
  return std::move(w).take();
}

std::optional<IssuanceRequest> decode_request(ByteView bytes) {
  ByteReader r(bytes);
  auto version = r.u8();
  auto subject = r.array<kIdBytes>();
  auto tag = r.u8();
  auto len = r.u16();
  if (!version || !subject || !tag || !len || *version != kWireVersion)
    return std::nullopt;
  auto payload = r.bytes(*len);
  auto nonce = r.array<16>();
  if (!payload || !nonce || !r.at_end()) return std::nullopt;
  IssuanceRequest req;
  req.subject_id = *subject;
  // Unknown evidence tags are carried through so the ASP can deny them.
  req.evidence.kind = static_cast<EvidenceKind>(*tag);
  req.evidence.payload.assign(payload->begin(), payload->end());
  req.request_nonce = *nonce;
  return req;
}

Bytes encode_response(const IssuanceResponse& resp) {
  ByteWriter w;
  w.u8(kWireVersion);
  if (resp.status == IssuanceResponse::Status::Issued) {
    if (!resp.credential) throw ContractError("issued response lacks credential");
    w.u8(0);
    w.bytes(encode_agecred(*resp.credential));
  } else {
    w.u8(static_cast<std::uint8_t>(resp.reason));
  }
  return std::move(w).take();
}

std::optional<IssuanceResponse> decode_response(ByteView bytes) {
  ByteReader r(bytes);
  auto version = r.u8();
  auto status = r.u8();
  if (!version || !status || *version != kWireVersion) return std::nullopt;
  if (*status == 0) {
    auto body = r.bytes(kAgeCredBytes);
    if (!body || !r.at_end()) return std::nullopt;
    auto cred = decode_agecred(*body);
    if (!cred) return std::nullopt;
    return IssuanceResponse::issued(*cred);
  }
  if (!r.at_end() || *status > static_cast<std::uint8_t>(DenialReason::Replay))
    return std::nullopt;
  return IssuanceResponse::denied(static_cast<DenialReason>(*status));
}

Bytes frame(ByteView message) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(message.size()));
  w.bytes(message);
  return std::move(w).take();
}

std::optional<Bytes> unframe(ByteView framed) {
  ByteReader r(framed);
  auto len = r.u32();
  if (!len) return std::nullopt;
  auto body = r.bytes(*len);
  if (!body || !r.at_end()) return std::nullopt;
  return Bytes(body->begin(), body->end());
}

// ---------------------------------------------------------------------------

IssuanceResponse AttributeServiceProvider::handle(const IssuanceRequest& req,
                                                  std::uint64_t now) {
  {
    std::lock_guard lock(mu_);
    if (!seen_nonces_.insert(req.request_nonce).second)
      return IssuanceResponse::denied(DenialReason::Replay);
  }

  switch (req.evidence.kind) {
    case EvidenceKind::AlwaysApprove:
      if (!req.evidence.payload.empty())
        return IssuanceResponse::denied(DenialReason::BadEvidence);
      break;
    case EvidenceKind::MockDateOfBirth: {
      std::string_view text(
          reinterpret_cast<const char*>(req.evidence.payload.data()),
          req.evidence.payload.size());
      auto dob = CivilDate::parse(text);
      if (!dob) return IssuanceResponse::denied(DenialReason::BadEvidence);
      if (age_in_years(*dob, now) < policy_.threshold)
        return IssuanceResponse::denied(DenialReason::UnderAge);
      break;
    }
    default:
      return IssuanceResponse::denied(DenialReason::BadEvidence);
  }

  return IssuanceResponse::issued(issue_agecred(
      keys_, req.subject_id, policy_.threshold, now, policy_.validity_seconds));
}

IssuanceResponse asp_handle_issuance(AttributeServiceProvider& asp,
                                     const IssuanceRequest& req,
                                     std::uint64_t now) {
  return asp.handle(req, now);
}

Bytes AspWireEndpoint::handle_frame(ByteView framed_request) {
  auto body = unframe(framed_request);
  std::optional<IssuanceRequest> req;
  if (body) req = decode_request(*body);
  IssuanceResponse resp = req ? asp_.handle(*req, now_)
                              : IssuanceResponse::denied(DenialReason::BadEvidence);
  return frame(encode_response(resp));
}

IssuanceResponse WireAspChannel::request_issuance(const IssuanceRequest& req) {
  Bytes reply = endpoint_.handle_frame(frame(encode_request(req)));
  auto body = unframe(reply);
  if (!body) return IssuanceResponse::denied(DenialReason::BadEvidence);
  auto resp = decode_response(*body);
  if (!resp) return IssuanceResponse::denied(DenialReason::BadEvidence);
  return *resp;
}

// ---------------------------------------------------------------------------

std::string_view to_string(EnrollFailure::Kind k) {
  switch (k) {
    case EnrollFailure::Kind::LivenessFailed: return "LivenessFailed";
    case EnrollFailure::Kind::IssuanceDenied: return "IssuanceDenied";
    case EnrollFailure::Kind::UntrustedCredential: return "UntrustedCredential";
  }
  return "Unknown";
}

Expected<DeviceRecord, EnrollFailure> device_enroll(
    const IdentityProfile& profile, IssuanceChannel& asp,
    const ProtocolConfig& cfg, const Evidence& evidence,
    std::uint64_t rng_seed, EnrollmentTrace* trace) {
  using crypto::derive_seed;

  // Capture, then the liveness gate; nothing biometric is processed and
  // nothing is sent anywhere until liveness passes.
  Embedding sample = sample_genuine(profile, {cfg.capture_sigma},
                                    derive_seed(rng_seed, "enroll/capture"));
  if (!liveness_check(cfg.liveness).passed)
    return EnrollFailure{EnrollFailure::Kind::LivenessFailed};

  const BchCode& code = cfg.code();
  auto [key, helper] =
      fe_generate(sample, code, quantizer_for(code.params(), cfg.dim),
                  derive_seed(rng_seed, "enroll/fe"));

  crypto::Drbg rng(rng_seed, "bbcreds/enroll/request");
  IssuanceRequest req;
  req.subject_id = rng.array<kIdBytes>();
  req.evidence = evidence;
  req.request_nonce = rng.array<16>();
  IssuanceResponse resp = asp.request_issuance(req);
  if (resp.status != IssuanceResponse::Status::Issued || !resp.credential)
    return EnrollFailure{EnrollFailure::Kind::IssuanceDenied, resp.reason};

  const AgeCred& cred = *resp.credential;
  if (!crypto::verify(asp.issuer_public(), agecred_signed_bytes(cred),
                      cred.signature) ||
      cred.subject_id != req.subject_id)
    return EnrollFailure{EnrollFailure::Kind::UntrustedCredential};

  BindingTrace binding_trace;
  auto bound = bind_enroll(key, cred, cfg.variant,
                           derive_seed(rng_seed, "enroll/bind"),
                           trace ? &binding_trace : nullptr);
  if (trace) {
    trace->key = key;
    trace->secret = binding_trace.secret;
    trace->credential = cred;
  }
  return DeviceRecord{std::move(helper), std::move(bound.sketch), bound.digest,
                      std::move(bound.bound)};
}

std::string_view to_string(DeviceAuthFailure f) {
  switch (f) {
    case DeviceAuthFailure::LivenessFailed: return "LivenessFailed";
    case DeviceAuthFailure::ExtractFailed: return "ExtractFailed";
    case DeviceAuthFailure::HashMismatch: return "HashMismatch";
    case DeviceAuthFailure::SketchOpenFailed: return "SketchOpenFailed";
    case DeviceAuthFailure::DecryptFailed: return "DecryptFailed";
    case DeviceAuthFailure::MalformedCredential: return "MalformedCredential";
  }
  return "Unknown";
}

Expected<AgeCred, DeviceAuthFailure> device_authenticate(
    const Embedding& sample, const DeviceRecord& record,
    const LivenessPolicy& liveness) {
  if (!liveness_check(liveness).passed) return DeviceAuthFailure::LivenessFailed;

  auto key = fe_reproduce(sample, record.helper);
  if (!key) return DeviceAuthFailure::ExtractFailed;

  auto cred = unbind_auth(*key, record.sketch, record.digest, record.bound);
  if (!cred) {
    switch (cred.error()) {
      case AuthFailure::HashMismatch: return DeviceAuthFailure::HashMismatch;
      case AuthFailure::SketchOpenFailed:
        return DeviceAuthFailure::SketchOpenFailed;
      case AuthFailure::DecryptFailed: return DeviceAuthFailure::DecryptFailed;
      case AuthFailure::MalformedCredential:
        return DeviceAuthFailure::MalformedCredential;
    }
  }
  return cred.value();
}

AccessDecision rp_check_access(const AgeCred& cred,
                               const PublicKey& issuer_public,
                               std::uint64_t now, int required_age_over) {
  Verdict v = verify_agecred(cred, issuer_public, now, required_age_over);
  return {v.accepted, v.reason};
}

}  // namespace bbcreds
