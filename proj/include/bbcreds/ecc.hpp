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

#ifndef BBCREDS_ECC_HPP
#define BBCREDS_ECC_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bbcreds/quantize.hpp"

namespace bbcreds {

struct CodeParams {
  std::size_t n = 0;  // codeword bits
  std::size_t k = 0;  // message bits
  std::size_t t = 0;  // guaranteed correctable errors

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

// Narrow-sense binary BCH code of length n = 2^m - 1 over GF(2^m), with a
// systematic encoder and a Berlekamp-Massey / Chien bounded-distance
// decoder.
//
// Bit layout of a codeword c(x) = sum c_i x^i: bit i of the BitString is
// c_i. Positions [0, n-k) hold parity, [n-k, n) hold the message, so
// message bit j is codeword bit n-k+j.
class BchCode {
 public:
  // Builds the code with designed distance 2t+1 over GF(2^m) using the
  // built-in primitive polynomial for m. Supported m: 3..12.
  BchCode(unsigned m, std::size_t t);

  // Process-wide cache keyed by (n, t); tables are immutable once built so
  // the returned reference is safe to share across threads.
  static const BchCode& shared(std::size_t n, std::size_t t);
  // Looks up (n, t) and checks the resulting k; throws ContractError when
  // the triple does not describe a supported BCH code.
  static const BchCode& for_params(const CodeParams& params);

  // BCH(511, 259, t=30) over GF(2^9).
  static const BchCode& production();
  // BCH(15, 7, t=2) over GF(2^4); small enough to enumerate exhaustively.
  static const BchCode& small_test();

  const CodeParams& params() const { return params_; }
  unsigned field_degree() const { return m_; }
  // Binary generator polynomial, coefficient of x^i at index i.
  const std::vector<std::uint8_t>& generator() const { return generator_; }

  BitString encode(const BitString& message) const;
  // nullopt when the word lies outside every decoding sphere the decoder
  // can resolve. Words more than t errors from a codeword may also be
  // miscorrected to a different message.
  std::optional<BitString> decode(const BitString& word) const;

 private:
  int gf_mul(int a, int b) const;
  int gf_div(int a, int b) const;
  int gf_pow_alpha(long long e) const;

  unsigned m_;
  CodeParams params_;
  std::vector<int> exp_;  // length 2n, exp_[i] = alpha^i
  std::vector<int> log_;  // length n+1, log_[0] unused
  std::vector<std::uint8_t> generator_;
};

}  // namespace bbcreds

#endif  // BBCREDS_ECC_HPP
