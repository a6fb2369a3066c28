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

#ifndef BBCREDS_FEXTRACT_HPP
#define BBCREDS_FEXTRACT_HPP

#include <cstdint>
#include <string_view>
#include <utility>

#include "bbcreds/bytes.hpp"
#include "bbcreds/ecc.hpp"
#include "bbcreds/quantize.hpp"
#include "bbcreds/synthbio.hpp"

namespace bbcreds {

inline constexpr std::size_t kStableKeyBytes = 32;
inline constexpr std::size_t kSaltBytes = 16;
inline constexpr std::uint8_t kHelperVersion = 1;
inline constexpr std::string_view kFuzzyExtractorLabel = "bbcreds/fe/v1";

struct StableKey {
  ByteArray<kStableKeyBytes> key{};
  friend bool operator==(const StableKey&, const StableKey&) = default;
};

// Public recovery data for the code-offset construction:
// offset = quantize(e) XOR encode(m), key = HKDF(m, salt).
struct HelperData {
  std::uint8_t version = kHelperVersion;
  ByteArray<kSaltBytes> salt{};
  BitString offset;
  CodeParams code;
  QuantizerConfig quant;

  // Throws ContractError if offset/code/quantizer lengths disagree or the
  // code parameters are not a supported BCH code.
  void validate() const;

  friend bool operator==(const HelperData&, const HelperData&) = default;
};

struct ExtractFailure {
  enum class Reason { DecodeFailed };
  Reason reason = Reason::DecodeFailed;
};

// The quantizer config matching a code: first n coordinates of a
// dim-dimensional embedding.
QuantizerConfig quantizer_for(const CodeParams& code,
                              std::size_t dim = kDefaultDim);

// Gen. Draws the message and salt from rng_seed.
std::pair<StableKey, HelperData> fe_generate(const Embedding& e,
                                             const BchCode& code,
                                             const QuantizerConfig& quant,
                                             std::uint64_t rng_seed);

// Rep.
Expected<StableKey, ExtractFailure> fe_reproduce(const Embedding& e,
                                                 const HelperData& helper);

// Key derivation from the code message: HKDF-SHA256 with the helper salt.
StableKey derive_stable_key(const BitString& message,
                            const ByteArray<kSaltBytes>& salt);

// version(1) || salt(16) || n(2) || k(2) || t(2) || dim(2) || offset bits.
// Only the default quantizer position selection is representable.
Bytes encode_helper(const HelperData& helper);
std::optional<HelperData> decode_helper(ByteView bytes);

}  // namespace bbcreds

#endif  // BBCREDS_FEXTRACT_HPP
