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

#ifndef BBCREDS_BYTES_HPP
#define BBCREDS_BYTES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bbcreds {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

template <std::size_t N>
using ByteArray = std::array<std::uint8_t, N>;

// Raised when a caller breaks an operation's precondition (wrong lengths,
// inconsistent parameters). Protocol-level failures are returned, not thrown.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Minimal value-or-error carrier (std::expected is C++23).
template <typename T, typename E>
class Expected {
 public:
  Expected(T value) : state_(std::in_place_index<0>, std::move(value)) {}
  Expected(E error) : state_(std::in_place_index<1>, std::move(error)) {}

  bool has_value() const noexcept { return state_.index() == 0; }
  explicit operator bool() const noexcept { return has_value(); }

  const T& value() const& {
    if (!has_value()) throw std::logic_error("Expected: no value");
    return std::get<0>(state_);
  }
  T& value() & {
    if (!has_value()) throw std::logic_error("Expected: no value");
    return std::get<0>(state_);
  }
  T&& value() && {
    if (!has_value()) throw std::logic_error("Expected: no value");
    return std::get<0>(std::move(state_));
  }
  const E& error() const {
    if (has_value()) throw std::logic_error("Expected: no error");
    return std::get<1>(state_);
  }

  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, E> state_;
};

std::string to_hex(ByteView data);
std::optional<Bytes> from_hex(std::string_view hex);

template <std::size_t N>
std::optional<ByteArray<N>> array_from_hex(std::string_view hex) {
  auto raw = from_hex(hex);
  if (!raw || raw->size() != N) return std::nullopt;
  ByteArray<N> out{};
  std::copy(raw->begin(), raw->end(), out.begin());
  return out;
}

// True when `needle` occurs as a contiguous window anywhere in `haystack`.
bool contains_window(ByteView haystack, ByteView needle);

template <std::size_t N>
ByteArray<N> xor_arrays(const ByteArray<N>& a, const ByteArray<N>& b) {
  ByteArray<N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] ^ b[i];
  return out;
}

// Big-endian appender used by every canonical encoding in the project.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void bytes(ByteView v) { buf_.insert(buf_.end(), v.begin(), v.end()); }

  const Bytes& data() const& { return buf_; }
  Bytes take() && { return std::move(buf_); }

 private:
  Bytes buf_;
};

// Bounds-checked big-endian reader. Every read returns nullopt on underrun
// and leaves the cursor untouched.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::optional<std::uint8_t> u8();
  std::optional<std::uint16_t> u16();
  std::optional<std::uint32_t> u32();
  std::optional<std::uint64_t> u64();
  std::optional<ByteView> bytes(std::size_t n);

  template <std::size_t N>
  std::optional<ByteArray<N>> array() {
    auto raw = bytes(N);
    if (!raw) return std::nullopt;
    ByteArray<N> out{};
    std::copy(raw->begin(), raw->end(), out.begin());
    return out;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  std::optional<std::uint64_t> be(std::size_t width);

  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace bbcreds

#endif  // BBCREDS_BYTES_HPP
