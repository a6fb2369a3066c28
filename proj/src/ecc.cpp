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

#include "bbcreds/ecc.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>

#include "bbcreds/bytes.hpp"

namespace bbcreds {

namespace {

// Primitive polynomials, bit i = coefficient of x^i.
int primitive_polynomial(unsigned m) {
  switch (m) {
    case 3: return 0x00b;   // x^3 + x + 1
    case 4: return 0x013;   // x^4 + x + 1
    case 5: return 0x025;   // x^5 + x^2 + 1
    case 6: return 0x043;   // x^6 + x + 1
    case 7: return 0x083;   // x^7 + x + 1
    case 8: return 0x11d;   // x^8 + x^4 + x^3 + x^2 + 1
    case 9: return 0x211;   // x^9 + x^4 + 1
    case 10: return 0x409;  // x^10 + x^3 + 1
    case 11: return 0x805;  // x^11 + x^2 + 1
    case 12: return 0x1053; // x^12 + x^6 + x^4 + x + 1
    default:
      throw ContractError("bch: unsupported field degree " +
                          std::to_string(m));
  }
}

unsigned degree_for_length(std::size_t n) {
  for (unsigned m = 3; m <= 12; ++m)
    if (n == (std::size_t{1} << m) - 1) return m;
  throw ContractError("bch: length " + std::to_string(n) +
                      " is not 2^m - 1 for a supported m");
}

}  // namespace

BchCode::BchCode(unsigned m, std::size_t t) : m_(m) {
  const int poly = primitive_polynomial(m);
  const int n = (1 << m) - 1;
  if (t == 0 || 2 * t >= static_cast<std::size_t>(n))
    throw ContractError("bch: t out of range");

  exp_.assign(2 * n, 0);
  log_.assign(n + 1, -1);
  int x = 1;
  for (int i = 0; i < n; ++i) {
    if (log_[x] != -1) throw ContractError("bch: polynomial not primitive");
    exp_[i] = x;
    log_[x] = i;
    x <<= 1;
    if (x & (1 << m)) x ^= poly;
  }
  for (int i = n; i < 2 * n; ++i) exp_[i] = exp_[i - n];

  // g(x) = product of the minimal polynomials of alpha^1 .. alpha^2t; each
  // cyclotomic coset contributes its roots once.
  std::set<int> roots;
  for (std::size_t i = 1; i <= 2 * t; ++i) {
    int r = static_cast<int>(i);
    do {
      roots.insert(r);
      r = (r * 2) % n;
    } while (r != static_cast<int>(i));
  }
  std::vector<int> g{1};  // GF(2^m) coefficients during the product
  for (int r : roots) {
    std::vector<int> next(g.size() + 1, 0);
    for (std::size_t j = 0; j < g.size(); ++j) {
      next[j + 1] ^= g[j];
      next[j] ^= gf_mul(g[j], exp_[r]);
    }
    g = std::move(next);
  }
  generator_.resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g[j] > 1) throw ContractError("bch: generator is not binary");
    generator_[j] = static_cast<std::uint8_t>(g[j]);
  }

  params_.n = static_cast<std::size_t>(n);
  params_.k = params_.n - (generator_.size() - 1);
  params_.t = t;
}

const BchCode& BchCode::shared(std::size_t n, std::size_t t) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>,
                  std::unique_ptr<BchCode>>
      cache;
  unsigned m = degree_for_length(n);
  std::lock_guard lock(mu);
  auto& slot = cache[{n, t}];
  if (!slot) slot = std::make_unique<BchCode>(m, t);
  return *slot;
}

const BchCode& BchCode::for_params(const CodeParams& params) {
  const BchCode& code = shared(params.n, params.t);
  if (code.params().k != params.k)
    throw ContractError("bch: (n=" + std::to_string(params.n) +
                        ", t=" + std::to_string(params.t) + ") gives k=" +
                        std::to_string(code.params().k) + ", not " +
                        std::to_string(params.k));
  return code;
}

const BchCode& BchCode::production() { return shared(511, 30); }

const BchCode& BchCode::small_test() { return shared(15, 2); }

int BchCode::gf_mul(int a, int b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[log_[a] + log_[b]];
}

int BchCode::gf_div(int a, int b) const {
  if (b == 0) throw ContractError("bch: division by zero");
  if (a == 0) return 0;
  const int n = static_cast<int>(params_.n);
  return exp_[(log_[a] - log_[b] + n) % n];
}

int BchCode::gf_pow_alpha(long long e) const {
  const long long n = static_cast<long long>(params_.n);
  return exp_[static_cast<std::size_t>(((e % n) + n) % n)];
}

BitString BchCode::encode(const BitString& message) const {
  if (message.size() != params_.k)
    throw ContractError("bch encode: message has " +
                        std::to_string(message.size()) + " bits, expected " +
                        std::to_string(params_.k));
  const std::size_t r = params_.n - params_.k;
  // LFSR division: parity = x^r * m(x) mod g(x).
  std::vector<std::uint8_t> parity(r, 0);
  for (std::size_t j = params_.k; j-- > 0;) {
    std::uint8_t fb = static_cast<std::uint8_t>(message.get(j)) ^ parity[r - 1];
    for (std::size_t i = r - 1; i > 0; --i)
      parity[i] = parity[i - 1] ^ (fb & generator_[i]);
    parity[0] = fb & generator_[0];
  }
  BitString word(params_.n);
  for (std::size_t i = 0; i < r; ++i)
    if (parity[i]) word.set(i, true);
  for (std::size_t j = 0; j < params_.k; ++j)
    if (message.get(j)) word.set(r + j, true);
  return word;
}

std::optional<BitString> BchCode::decode(const BitString& word) const {
  if (word.size() != params_.n)
    throw ContractError("bch decode: word has " + std::to_string(word.size()) +
                        " bits, expected " + std::to_string(params_.n));
  const std::size_t n = params_.n;
  const std::size_t t2 = 2 * params_.t;

  std::vector<std::size_t> ones;
  for (std::size_t i = 0; i < n; ++i)
    if (word.get(i)) ones.push_back(i);

  // S_j = c(alpha^j), j = 1..2t; even syndromes are squares of S_{j/2}.
  std::vector<int> syn(t2 + 1, 0);
  bool clean = true;
  for (std::size_t j = 1; j <= t2; ++j) {
    if (j % 2 == 0) {
      syn[j] = gf_mul(syn[j / 2], syn[j / 2]);
    } else {
      int s = 0;
      for (std::size_t i : ones)
        s ^= gf_pow_alpha(static_cast<long long>(i * j));
      syn[j] = s;
    }
    if (syn[j] != 0) clean = false;
  }

  BitString corrected = word;
  if (!clean) {
    // Berlekamp-Massey for the error locator Lambda(x).
    std::vector<int> lambda(t2 + 2, 0), prev(t2 + 2, 0);
    lambda[0] = prev[0] = 1;
    std::size_t len = 0, shift = 1;
    int prev_disc = 1;
    for (std::size_t step = 0; step < t2; ++step) {
      int d = syn[step + 1];
      for (std::size_t i = 1; i <= len; ++i)
        d ^= gf_mul(lambda[i], syn[step + 1 - i]);
      if (d == 0) {
        ++shift;
        continue;
      }
      int coef = gf_div(d, prev_disc);
      std::vector<int> updated = lambda;
      for (std::size_t i = 0; i + shift < updated.size(); ++i)
        updated[i + shift] ^= gf_mul(coef, prev[i]);
      if (2 * len <= step) {
        prev = lambda;
        len = step + 1 - len;
        prev_disc = d;
        shift = 1;
      } else {
        ++shift;
      }
      lambda = std::move(updated);
    }
    if (len > params_.t) return std::nullopt;
    for (std::size_t i = len + 1; i < lambda.size(); ++i)
      if (lambda[i] != 0) return std::nullopt;

    // Chien search: an error at position i means Lambda(alpha^-i) = 0.
    std::size_t found = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int acc = 0;
      for (std::size_t d = 0; d <= len; ++d) {
        if (lambda[d] == 0) continue;
        acc ^= gf_mul(lambda[d],
                      gf_pow_alpha(-static_cast<long long>(i * d)));
      }
      if (acc == 0) {
        corrected.flip(i);
        ++found;
      }
    }
    if (found != len) return std::nullopt;
  }

  BitString message(params_.k);
  const std::size_t r = n - params_.k;
  for (std::size_t j = 0; j < params_.k; ++j)
    if (corrected.get(r + j)) message.set(j, true);
  return message;
}

}  // namespace bbcreds
