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

#ifndef BBCREDS_SYNTHBIO_HPP
#define BBCREDS_SYNTHBIO_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bbcreds {

inline constexpr std::size_t kDefaultDim = 512;
inline constexpr std::size_t kMinDim = 8;

// Unit-norm real vector standing in for a face template.
class Embedding {
 public:
  Embedding() = default;

  // Normalizes `values` to unit L2 norm. Throws ContractError on empty,
  // non-finite, or all-zero input.
  static Embedding normalized(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double norm() const;

  Embedding operator-() const;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  explicit Embedding(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

struct IdentityProfile {
  Embedding mean;
  std::uint64_t seed = 0;

  friend bool operator==(const IdentityProfile&,
                         const IdentityProfile&) = default;
};

struct NoiseModel {
  double sigma = 0.0;  // per-dimension std-dev, applied before renormalizing
};

IdentityProfile new_identity(std::uint64_t seed, std::size_t dim = kDefaultDim);

Embedding sample_genuine(const IdentityProfile& profile, NoiseModel noise,
                         std::uint64_t rng_seed);

Embedding sample_impostor(std::uint64_t rng_seed,
                          std::size_t dim = kDefaultDim);

// i.i.d. standard normal draws (Box-Muller over the project DRBG, so the
// stream is identical across standard libraries).
std::vector<double> gaussian_vector(std::uint64_t seed, const char* label,
                                    std::size_t count);

}  // namespace bbcreds

#endif  // BBCREDS_SYNTHBIO_HPP
