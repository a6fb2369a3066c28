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

#include "bbcreds/fextract.hpp"

#include <limits>

#include "bbcreds/crypto.hpp"

namespace bbcreds {

void HelperData::validate() const {
  if (version != kHelperVersion)
    throw ContractError("helper: unsupported version");
  quant.validate();
  if (offset.size() != code.n)
    throw ContractError("helper: offset length != code length");
  if (quant.code_length != code.n)
    throw ContractError("helper: quantizer length != code length");
  BchCode::for_params(code);
}

QuantizerConfig quantizer_for(const CodeParams& code, std::size_t dim) {
  return QuantizerConfig::first_positions(dim, code.n);
}

StableKey derive_stable_key(const BitString& message,
                            const ByteArray<kSaltBytes>& salt) {
  auto okm = crypto::hkdf_sha256(message.packed(), salt,
                                 crypto::as_bytes(kFuzzyExtractorLabel),
                                 kStableKeyBytes);
  StableKey k;
  std::copy(okm.begin(), okm.end(), k.key.begin());
  return k;
}

std::pair<StableKey, HelperData> fe_generate(const Embedding& e,
                                             const BchCode& code,
                                             const QuantizerConfig& quant,
                                             std::uint64_t rng_seed) {
  quant.validate();
  if (quant.dim != e.dim())
    throw ContractError("fe_generate: embedding dim does not match quantizer");
  if (quant.code_length != code.params().n)
    throw ContractError("fe_generate: quantizer length != code length");

  crypto::Drbg rng(rng_seed, "bbcreds/fe/gen");
  BitString message(code.params().k);
  {
    Bytes raw(message.packed().size());
    rng.fill(raw);
    if (code.params().k % 8 != 0)
      raw.back() &= static_cast<std::uint8_t>(0xff00u >> (code.params().k % 8));
    message = BitString::from_packed(code.params().k, raw);
  }

  HelperData helper;
  helper.salt = rng.array<kSaltBytes>();
  helper.code = code.params();
  helper.quant = quant;
  helper.offset = quantize(e, quant) ^ code.encode(message);
  return {derive_stable_key(message, helper.salt), std::move(helper)};
}

Expected<StableKey, ExtractFailure> fe_reproduce(const Embedding& e,
                                                 const HelperData& helper) {
  helper.validate();
  if (e.dim() != helper.quant.dim)
    throw ContractError("fe_reproduce: embedding dim does not match helper");
  const BchCode& code = BchCode::for_params(helper.code);
  auto message = code.decode(quantize(e, helper.quant) ^ helper.offset);
  if (!message) return ExtractFailure{};
  return derive_stable_key(*message, helper.salt);
}

Bytes encode_helper(const HelperData& helper) {
  helper.validate();
  if (!helper.quant.uses_default_positions())
    throw ContractError("helper encoding supports default positions only");
  constexpr auto kMax = std::numeric_limits<std::uint16_t>::max();
  if (helper.code.n > kMax || helper.quant.dim > kMax)
    throw ContractError("helper: parameters exceed 16-bit fields");
  ByteWriter w;
  w.u8(helper.version);
  w.bytes(helper.salt);
  w.u16(static_cast<std::uint16_t>(helper.code.n));
  w.u16(static_cast<std::uint16_t>(helper.code.k));
  w.u16(static_cast<std::uint16_t>(helper.code.t));
  w.u16(static_cast<std::uint16_t>(helper.quant.dim));
  w.bytes(helper.offset.packed());
  return std::move(w).take();
}

std::optional<HelperData> decode_helper(ByteView bytes) {
  ByteReader r(bytes);
  HelperData h;
  auto version = r.u8();
  auto salt = r.array<kSaltBytes>();
  auto n = r.u16();
  auto k = r.u16();
  auto t = r.u16();
  auto dim = r.u16();
  if (!version || !salt || !n || !k || !t || !dim) return std::nullopt;
  if (*version != kHelperVersion) return std::nullopt;
  if (*n == 0 || *n > *dim) return std::nullopt;
  auto packed = r.bytes((static_cast<std::size_t>(*n) + 7) / 8);
  if (!packed || !r.at_end()) return std::nullopt;
  try {
    h.version = *version;
    h.salt = *salt;
    h.code = {*n, *k, *t};
    h.quant = QuantizerConfig::first_positions(*dim, *n);
    h.offset = BitString::from_packed(*n, *packed);
    h.validate();
  } catch (const ContractError&) {
    return std::nullopt;
  }
  return h;
}

}  // namespace bbcreds
