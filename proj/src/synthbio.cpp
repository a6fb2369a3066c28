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

#include "bbcreds/synthbio.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bbcreds/bytes.hpp"
#include "bbcreds/crypto.hpp"

namespace bbcreds {

namespace {

void require_dim(std::size_t dim) {
  if (dim < kMinDim)
    throw ConfigError("embedding dimension must be >= " +
                      std::to_string(kMinDim) + ", got " +
                      std::to_string(dim));
}

}  // namespace

Embedding Embedding::normalized(std::vector<double> values) {
  if (values.empty()) throw ContractError("embedding: empty vector");
  double sq = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw ContractError("embedding: non-finite value");
    sq += v * v;
  }
  double n = std::sqrt(sq);
  if (n == 0.0) throw ContractError("embedding: zero vector");
  for (double& v : values) v /= n;
  return Embedding(std::move(values));
}

double Embedding::norm() const {
  double sq = 0.0;
  for (double v : values_) sq += v * v;
  return std::sqrt(sq);
}

Embedding Embedding::operator-() const {
  std::vector<double> v(values_);
  for (double& x : v) x = -x;
  return Embedding(std::move(v));
}

std::vector<double> gaussian_vector(std::uint64_t seed, const char* label,
                                    std::size_t count) {
  crypto::Drbg rng(seed, label);
  std::vector<double> out;
  out.reserve(count + 1);
  while (out.size() < count) {
    // 1 - u keeps the log argument in (0, 1].
    double u1 = 1.0 - rng.next_unit();
    double u2 = rng.next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    out.push_back(r * std::cos(theta));
    out.push_back(r * std::sin(theta));
  }
  out.resize(count);
  return out;
}

IdentityProfile new_identity(std::uint64_t seed, std::size_t dim) {
  require_dim(dim);
  return {Embedding::normalized(gaussian_vector(seed, "synthbio/identity", dim)),
          seed};
}

Embedding sample_genuine(const IdentityProfile& profile, NoiseModel noise,
                         std::uint64_t rng_seed) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
    throw ContractError("noise sigma must be finite and >= 0");
  // The mean is already unit-norm; renormalizing could perturb low bits.
  if (noise.sigma == 0.0) return profile.mean;
  std::vector<double> v = profile.mean.values();
  auto g = gaussian_vector(rng_seed, "synthbio/genuine", v.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += noise.sigma * g[i];
  return Embedding::normalized(std::move(v));
}

Embedding sample_impostor(std::uint64_t rng_seed, std::size_t dim) {
  require_dim(dim);
  return Embedding::normalized(
      gaussian_vector(rng_seed, "synthbio/impostor", dim));
}

}  // namespace bbcreds
