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

#ifndef BBCREDS_EVAL_HPP
#define BBCREDS_EVAL_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bbcreds/parties.hpp"

namespace bbcreds {

enum class TrialStage { Liveness, Extract, HashCheck, Decrypt, Success };
inline constexpr std::size_t kTrialStageCount = 5;

std::string_view to_string(TrialStage s);

struct TrialOutcome {
  enum class Kind { Genuine, Impostor };
  Kind kind = Kind::Genuine;
  TrialStage stage_reached = TrialStage::Success;
  bool succeeded = false;
};

// Sketch-open and credential-decode failures are folded into Decrypt.
TrialStage stage_of(DeviceAuthFailure f);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// 95% Wilson score interval for `events` out of `trials`.
Interval wilson_95(std::size_t events, std::size_t trials);

struct RateEstimate {
  std::size_t trials = 0;
  std::size_t events = 0;  // rejections for FRR, acceptances for FAR
  double rate = 0.0;
  Interval ci;
  // Count of trials ending at each TrialStage.
  std::array<std::size_t, kTrialStageCount> stages{};
};

struct EvalReport {
  double sigma = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<RateEstimate> frr;
  std::optional<RateEstimate> far;
};

struct EvalOptions {
  // 0 = std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned threads = 0;
};

// Trial i enrolls identity (seed + i) with a capture at `sigma` and
// authenticates a fresh genuine sample at `sigma`. Requires trials >= 100.
EvalReport estimate_frr(const ProtocolConfig& cfg, double sigma,
                        std::size_t trials, std::uint64_t seed,
                        EvalOptions opts = {});

// Enrolls one identity (capture noise cfg.capture_sigma), then trial i
// authenticates impostor sample (seed + i). Requires trials >= 1000.
EvalReport estimate_far(const ProtocolConfig& cfg, std::size_t trials,
                        std::uint64_t seed, EvalOptions opts = {});

inline constexpr std::string_view kSweepHeader =
    "sigma,trials,frr,frr_lo,frr_hi,far,far_lo,far_hi,seed";

// Writes the header and one row per sigma, in input order. FAR at each row
// uses an enrollment captured at that row's sigma. Throws IoError if the
// sink fails.
std::vector<EvalReport> sweep(const ProtocolConfig& cfg,
                              const std::vector<double>& sigmas,
                              std::size_t trials, std::uint64_t seed,
                              std::ostream& sink, EvalOptions opts = {});

std::string format_csv_row(const EvalReport& r);

}  // namespace bbcreds

#endif  // BBCREDS_EVAL_HPP
