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

#ifndef BBCREDS_QUANTIZE_HPP
#define BBCREDS_QUANTIZE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bbcreds/bytes.hpp"
#include "bbcreds/synthbio.hpp"

namespace bbcreds {

// Fixed-length bit string, packed MSB-first. Padding bits in the final byte
// are always zero so byte-level equality is bit-level equality.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n) : n_(n), bytes_((n + 7) / 8, 0) {}

  // Throws ContractError if `packed` has the wrong size or nonzero padding.
  static BitString from_packed(std::size_t n, ByteView packed);
  static BitString from_bits(const std::vector<bool>& bits);

  std::size_t size() const { return n_; }
  const Bytes& packed() const { return bytes_; }

  bool get(std::size_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }
  void set(std::size_t i, bool v) {
    std::uint8_t mask = static_cast<std::uint8_t>(0x80u >> (i & 7));
    if (v)
      bytes_[i >> 3] |= mask;
    else
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }
  void flip(std::size_t i) {
    bytes_[i >> 3] ^= static_cast<std::uint8_t>(0x80u >> (i & 7));
  }

  std::size_t weight() const;

  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString a, const BitString& b) {
    a ^= b;
    return a;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::size_t n_ = 0;
  Bytes bytes_;
};

struct QuantizerConfig {
  std::size_t dim = kDefaultDim;
  std::size_t code_length = 0;
  std::vector<std::size_t> selected_positions;

  // The first `code_length` coordinates.
  static QuantizerConfig first_positions(std::size_t dim,
                                         std::size_t code_length);

  bool uses_default_positions() const;
  // Throws ContractError unless there are code_length positions, strictly
  // increasing within [0, dim).
  void validate() const;

  friend bool operator==(const QuantizerConfig&,
                         const QuantizerConfig&) = default;
};

// Sign binarization: bit i is set iff the selected coordinate is >= 0.
BitString quantize(const Embedding& e, const QuantizerConfig& cfg);

std::size_t hamming(const BitString& a, const BitString& b);

}  // namespace bbcreds

#endif  // BBCREDS_QUANTIZE_HPP
