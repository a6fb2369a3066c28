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

#include "bbcreds/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "bbcreds/crypto.hpp"

namespace bbcreds {

namespace {

// Fixed evaluation clock; credentials only need to be inside their window.
constexpr std::uint64_t kEvalClock = 1'750'000'000;

template <typename Fn>
void parallel_trials(std::size_t trials, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < trials; i += threads) fn(i);
    });
}

LivenessPolicy trial_liveness(const LivenessPolicy& base, std::uint64_t ts) {
  LivenessPolicy p = base;
  if (p.mode == LivenessPolicy::Mode::SeededRandom)
    p.seed = crypto::derive_seed(ts, "eval/liveness");
  return p;
}

RateEstimate aggregate(const std::vector<TrialOutcome>& outcomes,
                       bool count_successes) {
  RateEstimate est;
  est.trials = outcomes.size();
  for (const auto& o : outcomes) {
    ++est.stages[static_cast<std::size_t>(o.stage_reached)];
    if (o.succeeded == count_successes) ++est.events;
  }
  est.rate = est.trials ? static_cast<double>(est.events) / est.trials : 0.0;
  est.ci = wilson_95(est.events, est.trials);
  return est;
}

TrialOutcome run_auth(TrialOutcome::Kind kind, const Embedding& sample,
                      const DeviceRecord& record, const LivenessPolicy& live) {
  auto res = device_authenticate(sample, record, live);
  if (res) return {kind, TrialStage::Success, true};
  return {kind, stage_of(res.error()), false};
}

EvalReport far_at(const ProtocolConfig& cfg, double enroll_sigma,
                  std::size_t trials, std::uint64_t seed, EvalOptions opts) {
  if (trials < 1000) throw ContractError("estimate_far needs >= 1000 trials");
  using crypto::derive_seed;
  AttributeServiceProvider asp(
      IssuerKeyPair::generate(derive_seed(seed, "eval/issuer")), AgePolicy{});
  InProcessAspChannel channel(asp, kEvalClock);

  ProtocolConfig enroll_cfg = cfg;
  enroll_cfg.capture_sigma = enroll_sigma;
  enroll_cfg.liveness = LivenessPolicy::always_pass();
  auto profile = new_identity(derive_seed(seed, "eval/far-identity"), cfg.dim);
  auto record = device_enroll(profile, channel, enroll_cfg,
                              Evidence::always_approve(),
                              derive_seed(seed, "eval/far-enroll"));
  if (!record) throw std::logic_error("estimate_far: reference enrollment failed");

  std::vector<TrialOutcome> outcomes(trials);
  parallel_trials(trials, opts.threads, [&](std::size_t i) {
    const std::uint64_t ts = seed + i;
    auto sample = sample_impostor(derive_seed(ts, "eval/impostor"), cfg.dim);
    outcomes[i] = run_auth(TrialOutcome::Kind::Impostor, sample, *record,
                           trial_liveness(cfg.liveness, ts));
  });

  EvalReport rep;
  rep.sigma = enroll_sigma;
  rep.trials = trials;
  rep.seed = seed;
  rep.far = aggregate(outcomes, /*count_successes=*/true);
  return rep;
}

}  // namespace

std::string_view to_string(TrialStage s) {
  switch (s) {
    case TrialStage::Liveness: return "Liveness";
    case TrialStage::Extract: return "Extract";
    case TrialStage::HashCheck: return "HashCheck";
    case TrialStage::Decrypt: return "Decrypt";
    case TrialStage::Success: return "Success";
  }
  return "Unknown";
}

TrialStage stage_of(DeviceAuthFailure f) {
  switch (f) {
    case DeviceAuthFailure::LivenessFailed: return TrialStage::Liveness;
    case DeviceAuthFailure::ExtractFailed: return TrialStage::Extract;
    case DeviceAuthFailure::HashMismatch: return TrialStage::HashCheck;
    case DeviceAuthFailure::SketchOpenFailed:
    case DeviceAuthFailure::DecryptFailed:
    case DeviceAuthFailure::MalformedCredential:
      return TrialStage::Decrypt;
  }
  return TrialStage::Decrypt;
}

Interval wilson_95(std::size_t events, std::size_t trials) {
  if (events > trials) throw ContractError("wilson_95: events > trials");
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(events) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

EvalReport estimate_frr(const ProtocolConfig& cfg, double sigma,
                        std::size_t trials, std::uint64_t seed,
                        EvalOptions opts) {
  if (trials < 100) throw ContractError("estimate_frr needs >= 100 trials");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ContractError("estimate_frr: sigma must be finite and >= 0");
  using crypto::derive_seed;
  AttributeServiceProvider asp(
      IssuerKeyPair::generate(derive_seed(seed, "eval/issuer")), AgePolicy{});
  InProcessAspChannel channel(asp, kEvalClock);
  ProtocolConfig trial_cfg = cfg;
  trial_cfg.capture_sigma = sigma;

  std::vector<TrialOutcome> outcomes(trials);
  parallel_trials(trials, opts.threads, [&](std::size_t i) {
    const std::uint64_t ts = seed + i;
    ProtocolConfig c = trial_cfg;
    c.liveness = trial_liveness(cfg.liveness, derive_seed(ts, "enroll"));
    auto profile = new_identity(derive_seed(ts, "eval/identity"), cfg.dim);
    auto record = device_enroll(profile, channel, c, Evidence::always_approve(),
                                derive_seed(ts, "eval/enroll"));
    if (!record) {
      outcomes[i] = {TrialOutcome::Kind::Genuine, TrialStage::Liveness, false};
      return;
    }
    auto sample =
        sample_genuine(profile, {sigma}, derive_seed(ts, "eval/genuine"));
    outcomes[i] = run_auth(TrialOutcome::Kind::Genuine, sample, *record,
                           trial_liveness(cfg.liveness, ts));
  });

  EvalReport rep;
  rep.sigma = sigma;
  rep.trials = trials;
  rep.seed = seed;
  rep.frr = aggregate(outcomes, /*count_successes=*/false);
  return rep;
}

EvalReport estimate_far(const ProtocolConfig& cfg, std::size_t trials,
                        std::uint64_t seed, EvalOptions opts) {
  return far_at(cfg, cfg.capture_sigma, trials, seed, opts);
}

std::string format_csv_row(const EvalReport& r) {
  auto rate = [](const std::optional<RateEstimate>& e, char* buf,
                 std::size_t len) {
    if (!e)
      std::snprintf(buf, len, ",,");
    else
      std::snprintf(buf, len, "%.6f,%.6f,%.6f", e->rate, e->ci.lo, e->ci.hi);
  };
  char frr[96], far[96], head[64];
  rate(r.frr, frr, sizeof frr);
  rate(r.far, far, sizeof far);
  std::snprintf(head, sizeof head, "%.6g,%zu", r.sigma, r.trials);
  return std::string(head) + "," + frr + "," + far + "," +
         std::to_string(r.seed);
}

std::vector<EvalReport> sweep(const ProtocolConfig& cfg,
                              const std::vector<double>& sigmas,
                              std::size_t trials, std::uint64_t seed,
                              std::ostream& sink, EvalOptions opts) {
  if (sigmas.empty()) throw ContractError("sweep: no sigmas given");
  std::vector<EvalReport> out;
  sink << kSweepHeader << '\n';
  for (double sigma : sigmas) {
    EvalReport rep = estimate_frr(cfg, sigma, trials, seed, opts);
    rep.far = far_at(cfg, sigma, trials, seed, opts).far;
    sink << format_csv_row(rep) << '\n';
    out.push_back(std::move(rep));
  }
  sink.flush();
  if (!sink) throw IoError("failed to write sweep CSV");
  return out;
}

}  // namespace bbcreds
