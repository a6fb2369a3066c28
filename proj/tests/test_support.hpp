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

#ifndef BBCREDS_TESTS_TEST_SUPPORT_HPP
#define BBCREDS_TESTS_TEST_SUPPORT_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "bbcreds/binding.hpp"
#include "bbcreds/credential.hpp"
#include "bbcreds/fextract.hpp"
#include "bbcreds/quantize.hpp"

namespace bbcreds::testing {

inline StableKey random_key(std::mt19937_64& rng) {
  StableKey k;
  for (auto& b : k.key) b = static_cast<std::uint8_t>(rng());
  return k;
}

template <std::size_t N>
ByteArray<N> random_array(std::mt19937_64& rng) {
  ByteArray<N> out{};
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

inline BitString random_bits(std::size_t n, std::mt19937_64& rng) {
  BitString b(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1) b.set(i, true);
  return b;
}

inline AgeCred random_credential(std::mt19937_64& rng) {
  static const IssuerKeyPair keys = IssuerKeyPair::generate(4242);
  auto subject = random_array<kIdBytes>(rng);
  int age = 1 + static_cast<int>(rng() % 100);
  std::uint64_t issued = 1'600'000'000 + rng() % 100'000'000;
  return issue_agecred(keys, subject, age, issued, 1 + rng() % 100'000'000);
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("bbcreds_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace bbcreds::testing

#endif  // BBCREDS_TESTS_TEST_SUPPORT_HPP
