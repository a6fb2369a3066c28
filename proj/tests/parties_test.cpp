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

#include <gtest/gtest.h>

#include <ctime>
#include <random>
#include <thread>
#include <vector>

#include "bbcreds/parties.hpp"
#include "test_support.hpp"

namespace bbcreds {
namespace {

constexpr std::uint64_t kNow = 1'750'000'000;  // 2025-06-15 UTC

std::uint64_t unix_of(int y, int m, int d) {
  std::tm tm{};
  tm.tm_year = y - 1900;
  tm.tm_mon = m - 1;
  tm.tm_mday = d;
  return static_cast<std::uint64_t>(timegm(&tm));
}

// Counts requests so tests can assert the ASP was (not) contacted and can
// inspect exactly which bytes crossed the boundary.
class CountingChannel : public IssuanceChannel {
 public:
  explicit CountingChannel(AttributeServiceProvider& asp) : inner_(asp, kNow) {}
  IssuanceResponse request_issuance(const IssuanceRequest& req) override {
    ++calls;
    sent.push_back(encode_request(req));
    return inner_.request_issuance(req);
  }
  PublicKey issuer_public() const override { return inner_.issuer_public(); }
  int calls = 0;
  std::vector<Bytes> sent;

 private:
  InProcessAspChannel inner_;
};

struct PartiesTest : ::testing::Test {
  AttributeServiceProvider asp{IssuerKeyPair::generate(101), AgePolicy{}};
  ProtocolConfig cfg{};
  Evidence adult = Evidence::date_of_birth({1990, 5, 17});
};

TEST(CivilDate, ParseAndFormat) {
  auto d = CivilDate::parse("2000-02-29");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->to_string(), "2000-02-29");
  EXPECT_FALSE(CivilDate::parse("1999-02-29"));
  EXPECT_FALSE(CivilDate::parse("2000-13-01"));
  EXPECT_FALSE(CivilDate::parse("2000-1-01"));
  EXPECT_FALSE(CivilDate::parse("abcd-ef-gh"));
  EXPECT_FALSE(CivilDate::parse(""));
}

TEST(CivilDate, FromUnixMatchesGmtime) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    std::time_t t = static_cast<std::time_t>(rng() % 8'000'000'000ull);
    std::tm tm{};
    gmtime_r(&t, &tm);
    auto d = CivilDate::from_unix(static_cast<std::uint64_t>(t));
    ASSERT_EQ(d.year, tm.tm_year + 1900) << t;
    ASSERT_EQ(d.month, static_cast<unsigned>(tm.tm_mon + 1)) << t;
    ASSERT_EQ(d.day, static_cast<unsigned>(tm.tm_mday)) << t;
  }
}

TEST(AgeInYears, BirthdayBoundaries) {
  CivilDate dob{2000, 6, 15};
  EXPECT_EQ(age_in_years(dob, unix_of(2018, 6, 14) + 86399), 17);
  EXPECT_EQ(age_in_years(dob, unix_of(2018, 6, 15)), 18);
  EXPECT_EQ(age_in_years(dob, unix_of(2000, 6, 15)), 0);
}

TEST(AgeInYears, LeapDayBirthday) {
  CivilDate dob{2000, 2, 29};
  EXPECT_EQ(age_in_years(dob, unix_of(2018, 2, 28)), 17);
  EXPECT_EQ(age_in_years(dob, unix_of(2018, 3, 1)), 18);
  EXPECT_EQ(age_in_years(dob, unix_of(2020, 2, 29)), 20);
}

TEST(Liveness, FixedPolicies) {
  EXPECT_TRUE(liveness_check(LivenessPolicy::always_pass()).passed);
  EXPECT_FALSE(liveness_check(LivenessPolicy::always_fail()).passed);
}

TEST(Liveness, SeededRandomRate) {
  int passed = 0;
  for (std::uint64_t s = 0; s < 10000; ++s)
    passed += liveness_check(LivenessPolicy::seeded_random(0.9, s)).passed;
  EXPECT_NEAR(passed / 10000.0, 0.9, 0.01);
  auto p = LivenessPolicy::seeded_random(0.5, 7);
  EXPECT_EQ(liveness_check(p).passed, liveness_check(p).passed);
}

TEST_F(PartiesTest, AspIssuesForAdults) {
  IssuanceRequest req{{1}, adult, {1}};
  auto resp = asp.handle(req, kNow);
  ASSERT_EQ(resp.status, IssuanceResponse::Status::Issued);
  ASSERT_TRUE(resp.credential);
  EXPECT_EQ(resp.credential->subject_id, req.subject_id);
  EXPECT_EQ(resp.credential->age_over, 18);
  EXPECT_EQ(resp.credential->issued_at, kNow);
  EXPECT_TRUE(verify_agecred(*resp.credential, asp.issuer_public(), kNow, 18).accepted);
}

TEST_F(PartiesTest, AspDobBoundary) {
  auto today = CivilDate::from_unix(kNow);
  CivilDate exactly18{today.year - 18, today.month, today.day};
  CivilDate one_day_short{today.year - 18, today.month, today.day + 1};
  EXPECT_EQ(asp.handle({{}, Evidence::date_of_birth(exactly18), {1}}, kNow).status,
            IssuanceResponse::Status::Issued);
  auto resp = asp.handle({{}, Evidence::date_of_birth(one_day_short), {2}}, kNow);
  EXPECT_EQ(resp.status, IssuanceResponse::Status::Denied);
  EXPECT_EQ(resp.reason, DenialReason::UnderAge);
  EXPECT_FALSE(resp.credential);
}

TEST_F(PartiesTest, AspEvidenceHandling) {
  EXPECT_EQ(asp.handle({{}, Evidence::always_approve(), {1}}, kNow).status,
            IssuanceResponse::Status::Issued);
  Evidence garbage{EvidenceKind::MockDateOfBirth, Bytes{'n', 'o'}};
  EXPECT_EQ(asp.handle({{}, garbage, {2}}, kNow).reason, DenialReason::BadEvidence);
  Evidence approve_with_payload{EvidenceKind::AlwaysApprove, Bytes{1}};
  EXPECT_EQ(asp.handle({{}, approve_with_payload, {3}}, kNow).reason,
            DenialReason::BadEvidence);
  Evidence unknown{static_cast<EvidenceKind>(9), {}};
  EXPECT_EQ(asp.handle({{}, unknown, {4}}, kNow).reason, DenialReason::BadEvidence);
}

TEST_F(PartiesTest, AspRejectsReplayedNonce) {
  IssuanceRequest req{{}, adult, {9, 9}};
  EXPECT_EQ(asp.handle(req, kNow).status, IssuanceResponse::Status::Issued);
  auto again = asp.handle(req, kNow);
  EXPECT_EQ(again.status, IssuanceResponse::Status::Denied);
  EXPECT_EQ(again.reason, DenialReason::Replay);
}

TEST_F(PartiesTest, AspHandlesConcurrentRequests) {
  std::vector<std::thread> threads;
  std::vector<int> issued(8, 0);
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        IssuanceRequest req{{}, adult, {}};
        req.request_nonce[0] = static_cast<std::uint8_t>(i);  // shared across threads
        issued[t] += asp.handle(req, kNow).status == IssuanceResponse::Status::Issued;
      }
    });
  for (auto& th : threads) th.join();
  int total = 0;
  for (int n : issued) total += n;
  EXPECT_EQ(total, 50);  // each nonce issued exactly once
}

TEST(Wire, RequestLayout) {
  IssuanceRequest req;
  for (std::size_t i = 0; i < 16; ++i) {
    req.subject_id[i] = static_cast<std::uint8_t>(i);
    req.request_nonce[i] = static_cast<std::uint8_t>(0xf0 + i);
  }
  req.evidence = Evidence::date_of_birth({2001, 1, 2});
  auto b = encode_request(req);
  ASSERT_EQ(b.size(), 1u + 16 + 1 + 2 + 10 + 16);
  EXPECT_EQ(b[0], kWireVersion);
  EXPECT_EQ(b[17], 1);
  EXPECT_EQ(b[18], 0);
  EXPECT_EQ(b[19], 10);
  EXPECT_EQ(std::string(b.begin() + 20, b.begin() + 30), "2001-01-02");
  EXPECT_EQ(b[30], 0xf0);
  auto back = decode_request(b);
  ASSERT_TRUE(back);
  EXPECT_EQ(*back, req);
  b.push_back(0);
  EXPECT_FALSE(decode_request(b));
}

TEST(Wire, ResponseLayout) {
  auto denied = encode_response(IssuanceResponse::denied(DenialReason::Replay));
  EXPECT_EQ(denied, (Bytes{kWireVersion, 3}));
  EXPECT_EQ(*decode_response(denied), IssuanceResponse::denied(DenialReason::Replay));

  std::mt19937_64 rng(3);
  auto ok = IssuanceResponse::issued(testing::random_credential(rng));
  auto bytes = encode_response(ok);
  ASSERT_EQ(bytes.size(), 2u + kAgeCredBytes);
  EXPECT_EQ(bytes[1], 0);
  EXPECT_EQ(*decode_response(bytes), ok);
  bytes.pop_back();
  EXPECT_FALSE(decode_response(bytes));
}

TEST(Wire, Framing) {
  Bytes msg{1, 2, 3};
  auto f = frame(msg);
  EXPECT_EQ(f, (Bytes{0, 0, 0, 3, 1, 2, 3}));
  EXPECT_EQ(*unframe(f), msg);
  f.pop_back();
  EXPECT_FALSE(unframe(f));
}

TEST_F(PartiesTest, WireChannelEndToEnd) {
  AspWireEndpoint endpoint(asp, kNow);
  WireAspChannel channel(endpoint, asp.issuer_public());
  auto rec = device_enroll(new_identity(1), channel, cfg, adult, 5);
  ASSERT_TRUE(rec);
  auto cred = device_authenticate(sample_genuine(new_identity(1), {0.0}, 0),
                                  rec.value(), LivenessPolicy::always_pass());
  ASSERT_TRUE(cred);
  EXPECT_TRUE(rp_check_access(cred.value(), asp.issuer_public(), kNow, 18).granted);
  Bytes junk{0, 0, 0, 1, 0xff};
  auto reply = unframe(endpoint.handle_frame(junk));
  ASSERT_TRUE(reply);
  auto resp = decode_response(*reply);
  ASSERT_TRUE(resp);
  EXPECT_EQ(resp->reason, DenialReason::BadEvidence);
}

TEST_F(PartiesTest, EnrollAuthenticateGrant) {
  CountingChannel channel(asp);
  auto profile = new_identity(2);
  auto rec = device_enroll(profile, channel, cfg, adult, 7);
  ASSERT_TRUE(rec);
  EXPECT_EQ(channel.calls, 1);
  auto cred = device_authenticate(sample_genuine(profile, {kSigmaDefault}, 1),
                                  rec.value(), LivenessPolicy::always_pass());
  ASSERT_TRUE(cred);
  EXPECT_EQ(channel.calls, 1);  // authentication never contacts the ASP
  auto d = rp_check_access(cred.value(), asp.issuer_public(), kNow, 18);
  EXPECT_TRUE(d.granted);
}

TEST_F(PartiesTest, EnrollIsDeterministic) {
  AttributeServiceProvider asp2{IssuerKeyPair::generate(101), AgePolicy{}};
  InProcessAspChannel a(asp, kNow), b(asp2, kNow);
  auto r1 = device_enroll(new_identity(3), a, cfg, adult, 11);
  auto r2 = device_enroll(new_identity(3), b, cfg, adult, 11);
  ASSERT_TRUE(r1 && r2);
  EXPECT_EQ(serialize_record(r1.value()), serialize_record(r2.value()));
}

TEST_F(PartiesTest, LivenessFailureSkipsIssuance) {
  CountingChannel channel(asp);
  auto c = cfg;
  c.liveness = LivenessPolicy::always_fail();
  auto rec = device_enroll(new_identity(4), channel, c, adult, 1);
  ASSERT_FALSE(rec);
  EXPECT_EQ(rec.error().kind, EnrollFailure::Kind::LivenessFailed);
  EXPECT_EQ(channel.calls, 0);
}

TEST_F(PartiesTest, IssuanceDenialPropagates) {
  InProcessAspChannel channel(asp, kNow);
  auto rec = device_enroll(new_identity(5), channel, cfg,
                           Evidence::date_of_birth({2015, 1, 1}), 1);
  ASSERT_FALSE(rec);
  EXPECT_EQ(rec.error().kind, EnrollFailure::Kind::IssuanceDenied);
  EXPECT_EQ(rec.error().denial, DenialReason::UnderAge);
}

TEST_F(PartiesTest, UntrustedIssuerIsRejected) {
  class LyingChannel : public InProcessAspChannel {
   public:
    using InProcessAspChannel::InProcessAspChannel;
    PublicKey issuer_public() const override {
      return IssuerKeyPair::generate(999).public_key();
    }
  };
  LyingChannel channel(asp, kNow);
  auto rec = device_enroll(new_identity(6), channel, cfg, adult, 1);
  ASSERT_FALSE(rec);
  EXPECT_EQ(rec.error().kind, EnrollFailure::Kind::UntrustedCredential);
}

TEST_F(PartiesTest, RequestCarriesNoBiometricSecrets) {
  for (auto v : {SketchVariant::Xor, SketchVariant::Encrypted}) {
    auto c = cfg;
    c.variant = v;
    for (std::uint64_t s = 0; s < 20; ++s) {
      CountingChannel channel(asp);
      EnrollmentTrace trace;
      auto rec = device_enroll(new_identity(100 + s), channel, c, adult,
                               1000 + s + static_cast<std::uint64_t>(v) * 100, &trace);
      ASSERT_TRUE(rec);
      ASSERT_EQ(channel.sent.size(), 1u);
      const auto& wire = channel.sent[0];
      EXPECT_FALSE(contains_window(wire, trace.key.key));
      EXPECT_FALSE(contains_window(wire, trace.secret.secret));
      auto helper = encode_helper(rec.value().helper);
      EXPECT_FALSE(contains_window(wire, ByteView(helper).subspan(1, 16)));
      EXPECT_FALSE(contains_window(wire, rec.value().digest.digest));
      EXPECT_EQ(wire.size(), 1u + 16 + 1 + 2 + 10 + 16);
    }
  }
}

TEST_F(PartiesTest, RecordRetainsNoKeyOrSecret) {
  for (auto v : {SketchVariant::Xor, SketchVariant::Encrypted}) {
    auto c = cfg;
    c.variant = v;
    for (std::uint64_t s = 0; s < 50; ++s) {
      InProcessAspChannel channel(asp, kNow);
      EnrollmentTrace trace;
      auto rec = device_enroll(new_identity(s), channel, c, adult,
                               5000 + s + static_cast<std::uint64_t>(v) * 100, &trace);
      ASSERT_TRUE(rec);
      auto bytes = serialize_record(rec.value());
      EXPECT_FALSE(contains_window(bytes, trace.key.key));
      EXPECT_FALSE(contains_window(bytes, trace.secret.secret));
    }
  }
}

TEST_F(PartiesTest, ImpostorsAreRejected) {
  InProcessAspChannel channel(asp, kNow);
  auto rec = device_enroll(new_identity(7), channel, cfg, adult, 3);
  ASSERT_TRUE(rec);
  int accepted = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    auto r = device_authenticate(sample_impostor(s), rec.value(),
                                 LivenessPolicy::always_pass());
    if (r) ++accepted;
    else
      EXPECT_TRUE(r.error() == DeviceAuthFailure::ExtractFailed ||
                  r.error() == DeviceAuthFailure::HashMismatch);
  }
  EXPECT_EQ(accepted, 0);
}

TEST_F(PartiesTest, AuthLivenessFailure) {
  InProcessAspChannel channel(asp, kNow);
  auto profile = new_identity(8);
  auto rec = device_enroll(profile, channel, cfg, adult, 3);
  ASSERT_TRUE(rec);
  auto r = device_authenticate(profile.mean, rec.value(), LivenessPolicy::always_fail());
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error(), DeviceAuthFailure::LivenessFailed);
}

TEST_F(PartiesTest, RelyingPartyDecisions) {
  IssuanceRequest req{{}, adult, {1}};
  auto cred = *asp.handle(req, kNow).credential;
  EXPECT_TRUE(rp_check_access(cred, asp.issuer_public(), kNow, 18).granted);
  auto d = rp_check_access(cred, asp.issuer_public(), kNow, 21);
  EXPECT_FALSE(d.granted);
  EXPECT_EQ(d.reason, RejectReason::ThresholdNotMet);
  d = rp_check_access(cred, asp.issuer_public(), kNow + 366ull * 86400, 18);
  EXPECT_EQ(d.reason, RejectReason::Expired);
  d = rp_check_access(cred, IssuerKeyPair::generate(5).public_key(), kNow, 18);
  EXPECT_EQ(d.reason, RejectReason::BadSignature);
}

}  // namespace
}  // namespace bbcreds
