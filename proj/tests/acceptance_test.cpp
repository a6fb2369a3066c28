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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>

#include "bbcreds/binding.hpp"
#include "bbcreds/cli.hpp"
#include "bbcreds/ecc.hpp"
#include "bbcreds/eval.hpp"
#include "bbcreds/parties.hpp"
#include "bbcreds/store.hpp"
#include "test_support.hpp"

namespace {

using namespace bbcreds;

struct Outcome {
  bool pass;
  std::string detail;
};

constexpr std::uint64_t kNow = 1'750'000'000;

Outcome key_size_contract() {
  static_assert(std::tuple_size_v<decltype(StableKey::key)> * 8 == 256);
  ProtocolConfig cfg;
  if (cfg.dim != 512) return {false, "default dim is not 512"};
  const auto& code = cfg.code();
  auto quant = quantizer_for(code.params(), cfg.dim);
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto [key, helper] = fe_generate(new_identity(s, 512).mean, code, quant, s);
    if (key.key.size() * 8 != 256 || helper.quant.dim != 512)
      return {false, "seed " + std::to_string(s)};
  }
  return {code.params().k >= 256, "100 keys, 256 bits each, dim 512, k=" +
                                      std::to_string(code.params().k)};
}

std::string frr_detail(const RateEstimate& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu/%zu rejected, wilson_hi=%.5f", r.events,
                r.trials, r.ci.hi);
  return buf;
}

Outcome zero_noise_soundness() {
  auto r = estimate_frr(ProtocolConfig{}, 0.0, 1000, 20251018);
  return {r.frr->events == 0, frr_detail(*r.frr)};
}

Outcome calibrated_frr() {
  auto r = estimate_frr(ProtocolConfig{}, kSigmaDefault, 1000, 20251018);
  return {r.frr->ci.hi <= 0.01,
          "sigma_default=" + std::to_string(kSigmaDefault) + ", " + frr_detail(*r.frr)};
}

Outcome impostor_rejection() {
  auto r = estimate_far(ProtocolConfig{}, 10000, 20251018);
  const auto& f = *r.far;
  std::size_t early = f.stages[static_cast<int>(TrialStage::Extract)] +
                      f.stages[static_cast<int>(TrialStage::HashCheck)];
  return {f.events == 0 && early == f.trials,
          std::to_string(f.events) + "/" + std::to_string(f.trials) +
              " accepted, extract=" +
              std::to_string(f.stages[static_cast<int>(TrialStage::Extract)]) +
              " hashcheck=" +
              std::to_string(f.stages[static_cast<int>(TrialStage::HashCheck)])};
}

Outcome ecc_exhaustive() {
  const auto& code = BchCode::small_test();
  const auto [n, k, t] = code.params();
  std::size_t checked = 0;
  for (unsigned v = 0; v < (1u << k); ++v) {
    BitString m(k);
    for (std::size_t j = 0; j < k; ++j)
      if ((v >> j) & 1u) m.set(j, true);
    auto c = code.encode(m);
    for (unsigned e = 0; e < (1u << n); ++e) {
      if (static_cast<std::size_t>(__builtin_popcount(e)) > t) continue;
      auto w = c;
      for (std::size_t i = 0; i < n; ++i)
        if ((e >> i) & 1u) w.flip(i);
      auto got = code.decode(w);
      if (!got || *got != m)
        return {false, "message " + std::to_string(v) + " error " + std::to_string(e)};
      ++checked;
    }
  }
  return {true, "BCH(" + std::to_string(n) + "," + std::to_string(k) + "," +
                    std::to_string(t) + "): " + std::to_string(checked) + " cases"};
}

Outcome xor_algebra() {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100000; ++i) {
    auto a = testing::random_array<32>(rng), b = testing::random_array<32>(rng);
    if (xor_arrays(xor_arrays(a, b), b) != a) return {false, "involution, pair " + std::to_string(i)};
  }
  for (int i = 0; i < 1000; ++i) {
    auto key = testing::random_key(rng);
    BindingTrace trace;
    auto b = bind_enroll(key, testing::random_credential(rng), SketchVariant::Xor,
                         rng(), &trace);
    if (bind_oneway(trace.secret, b.sketch) !=
        crypto::labeled_hash(kOnewayLabel, key.key))
      return {false, "one-way identity, trial " + std::to_string(i)};
  }
  return {true, "1e5 involution pairs, 1000 one-way identities"};
}

Outcome tamper_rejection() {
  std::size_t cases = 0;
  for (auto variant : {SketchVariant::Xor, SketchVariant::Encrypted}) {
    AttributeServiceProvider asp(IssuerKeyPair::generate(1), AgePolicy{});
    InProcessAspChannel channel(asp, kNow);
    ProtocolConfig cfg;
    cfg.variant = variant;
    auto profile = new_identity(77);
    auto rec = device_enroll(profile, channel, cfg, Evidence::always_approve(), 5);
    if (!rec) return {false, "enrollment failed"};
    auto expect = [&](const DeviceRecord& r, DeviceAuthFailure want) {
      ++cases;
      auto got = device_authenticate(profile.mean, r, LivenessPolicy::always_pass());
      return !got && got.error() == want;
    };
    if (!device_authenticate(profile.mean, *rec, LivenessPolicy::always_pass()))
      return {false, "untampered record rejected"};
    for (std::size_t i = 0; i < rec->bound.ciphertext.size(); ++i) {
      auto r = *rec;
      r.bound.ciphertext[i] ^= 0x01;
      if (!expect(r, DeviceAuthFailure::DecryptFailed))
        return {false, "ciphertext byte " + std::to_string(i)};
    }
    for (std::size_t i = 0; i < rec->bound.nonce.size(); ++i) {
      auto r = *rec;
      r.bound.nonce[i] ^= 0x01;
      if (!expect(r, DeviceAuthFailure::DecryptFailed))
        return {false, "nonce byte " + std::to_string(i)};
    }
    for (std::size_t i = 0; i < rec->digest.digest.size(); ++i) {
      auto r = *rec;
      r.digest.digest[i] ^= 0x01;
      if (!expect(r, DeviceAuthFailure::HashMismatch))
        return {false, "digest byte " + std::to_string(i)};
    }
  }
  return {true, std::to_string(cases) + " single-byte tampers, both sketch variants"};
}

Outcome retained_artifacts() {
  std::size_t records = 0;
  for (auto variant : {SketchVariant::Xor, SketchVariant::Encrypted}) {
    AttributeServiceProvider asp(IssuerKeyPair::generate(2), AgePolicy{});
    ProtocolConfig cfg;
    cfg.variant = variant;
    for (std::uint64_t s = 0; s < 100; ++s) {
      InProcessAspChannel channel(asp, kNow);
      EnrollmentTrace trace;
      auto rec = device_enroll(new_identity(s), channel, cfg,
                               Evidence::always_approve(),
                               s * 2 + static_cast<std::uint64_t>(variant), &trace);
      if (!rec) return {false, "enrollment failed"};
      auto bytes = serialize_record(*rec);
      // Walk the TLV framing: exactly tags 1..4, nothing else.
      std::vector<int> tags;
      for (std::size_t p = 5; p + 5 <= bytes.size();) {
        tags.push_back(bytes[p]);
        std::size_t len = (std::size_t{bytes[p + 1]} << 24) |
                          (std::size_t{bytes[p + 2]} << 16) |
                          (std::size_t{bytes[p + 3]} << 8) | bytes[p + 4];
        p += 5 + len;
      }
      if (tags != std::vector<int>{1, 2, 3, 4}) return {false, "unexpected components"};
      if (contains_window(bytes, trace.key.key)) return {false, "StableKey window"};
      if (contains_window(bytes, trace.secret.secret))
        return {false, "StableSecret window"};
      ++records;
    }
  }
  return {true, std::to_string(records) +
                    " records: helper, sketch, digest, bound credential only"};
}

Outcome cli_happy_path() {
  auto dir = testing::scratch_dir("acceptance_cli");
  const std::string issuer = (dir / "issuer").string();
  std::ostringstream out, err;
  auto run = [&](std::vector<std::string> args) { return cli::run(args, out, err); };
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string{std::istreambuf_iterator<char>(in), {}};
  };
  if (run({"--issuer", issuer, "asp-keygen", "--seed", "11"}) != 0)
    return {false, "asp-keygen"};
  for (const char* name : {"a.bbc", "b.bbc"}) {
    if (run({"--issuer", issuer, "--clock", "1750000000", "enroll",
             "--identity-seed", "5", "--dob", "1990-01-01", "--seed", "3",
             "--record", (dir / name).string()}) != 0)
      return {false, "enroll: " + err.str()};
  }
  if (read(dir / "a.bbc") != read(dir / "b.bbc")) return {false, "records differ"};
  std::ostringstream auth_out;
  int code = cli::run({"--issuer", issuer, "--clock", "1750000000", "auth",
                       "--record", (dir / "a.bbc").string(), "--identity-seed",
                       "5", "--seed", "1"},
                      auth_out, err);
  if (code != 0 || auth_out.str().find("GRANT") == std::string::npos)
    return {false, "auth exit " + std::to_string(code) + ": " + err.str()};
  return {true, "keygen, enroll x2 byte-identical, auth GRANT"};
}

Outcome store_format() {
  std::mt19937_64 rng(10);
  const auto& code = BchCode::production();
  std::size_t truncations = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto [key, helper] = fe_generate(new_identity(s).mean, code,
                                     quantizer_for(code.params()), s);
    auto b = bind_enroll(key, testing::random_credential(rng),
                         s % 2 ? SketchVariant::Encrypted : SketchVariant::Xor, s);
    DeviceRecord rec{helper, b.sketch, b.digest, b.bound};
    std::stringstream ss;
    save_record(rec, ss);
    auto back = load_record(ss);
    if (!back || back.value() != rec) return {false, "roundtrip, record " + std::to_string(s)};
    if (s < 2) {
      auto bytes = serialize_record(rec);
      for (std::size_t len = 0; len < bytes.size(); ++len, ++truncations)
        if (parse_record(ByteView(bytes).first(len)))
          return {false, "truncation to " + std::to_string(len) + " parsed"};
    }
  }
  return {true, "100 roundtrips, " + std::to_string(truncations) +
                    " truncations rejected"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"key size contract", key_size_contract},
      {"zero-noise soundness", zero_noise_soundness},
      {"calibrated genuine acceptance", calibrated_frr},
      {"impostor rejection", impostor_rejection},
      {"ECC exhaustive oracle", ecc_exhaustive},
      {"XOR algebra and one-way identity", xor_algebra},
      {"tamper rejection", tamper_rejection},
      {"retained-artifact audit", retained_artifacts},
      {"CLI end-to-end", cli_happy_path},
      {"store format", store_format},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", index++, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
