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

#include "bbcreds/quantize.hpp"

#include <bit>
#include <string>

namespace bbcreds {

BitString BitString::from_packed(std::size_t n, ByteView packed) {
  BitString out(n);
  if (packed.size() != out.bytes_.size())
    throw ContractError("bitstring: packed size does not match length");
  std::copy(packed.begin(), packed.end(), out.bytes_.begin());
  if (n % 8 != 0) {
    std::uint8_t pad_mask = static_cast<std::uint8_t>(0xffu >> (n % 8));
    if (out.bytes_.back() & pad_mask)
      throw ContractError("bitstring: nonzero padding bits");
  }
  return out;
}

BitString BitString::from_bits(const std::vector<bool>& bits) {
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out.set(i, bits[i]);
  return out;
}

std::size_t BitString::weight() const {
  std::size_t w = 0;
  for (auto b : bytes_) w += static_cast<std::size_t>(std::popcount(b));
  return w;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.n_ != n_) throw ContractError("bitstring xor: length mismatch");
  for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  return *this;
}

QuantizerConfig QuantizerConfig::first_positions(std::size_t dim,
                                                 std::size_t code_length) {
  QuantizerConfig cfg;
  cfg.dim = dim;
  cfg.code_length = code_length;
  cfg.selected_positions.resize(code_length);
  for (std::size_t i = 0; i < code_length; ++i) cfg.selected_positions[i] = i;
  cfg.validate();
  return cfg;
}

bool QuantizerConfig::uses_default_positions() const {
  for (std::size_t i = 0; i < selected_positions.size(); ++i)
    if (selected_positions[i] != i) return false;
  return selected_positions.size() == code_length;
}

void QuantizerConfig::validate() const {
  if (code_length == 0 || code_length > dim)
    throw ContractError("quantizer: code_length must be in [1, dim]");
  if (selected_positions.size() != code_length)
    throw ContractError("quantizer: expected " + std::to_string(code_length) +
                        " selected positions");
  for (std::size_t i = 0; i < selected_positions.size(); ++i) {
    if (selected_positions[i] >= dim)
      throw ContractError("quantizer: position out of range");
    if (i > 0 && selected_positions[i] <= selected_positions[i - 1])
      throw ContractError("quantizer: positions must be strictly increasing");
  }
}

BitString quantize(const Embedding& e, const QuantizerConfig& cfg) {
  if (e.dim() != cfg.dim)
    throw ContractError("quantize: embedding dim " + std::to_string(e.dim()) +
                        " != configured dim " + std::to_string(cfg.dim));
  BitString out(cfg.code_length);
  const auto& v = e.values();
  for (std::size_t i = 0; i < cfg.code_length; ++i)
    if (v[cfg.selected_positions[i]] >= 0.0) out.set(i, true);
  return out;
}

std::size_t hamming(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw ContractError("hamming: length mismatch");
  return (a ^ b).weight();
}

}  // namespace bbcreds
