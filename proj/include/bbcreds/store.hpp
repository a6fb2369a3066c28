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

#ifndef BBCREDS_STORE_HPP
#define BBCREDS_STORE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "bbcreds/binding.hpp"
#include "bbcreds/bytes.hpp"
#include "bbcreds/fextract.hpp"

namespace bbcreds {

// Everything the device keeps after enrollment.
struct DeviceRecord {
  HelperData helper;
  Sketch sketch;
  KeyDigest digest;
  BoundCredential bound;

  friend bool operator==(const DeviceRecord&, const DeviceRecord&) = default;
};

inline constexpr ByteArray<4> kRecordMagic{0x42, 0x42, 0x43, 0x31};  // "BBC1"
inline constexpr std::uint8_t kRecordFormatVersion = 0x01;

enum class RecordTag : std::uint8_t {
  HelperData = 0x01,
  Sketch = 0x02,
  KeyDigest = 0x03,
  BoundCredential = 0x04,
};

struct FormatError {
  enum class Kind {
    BadMagic,
    BadVersion,
    DuplicateTag,
    UnknownTag,
    Truncated,
    InvariantViolation,
  };
  Kind kind;
  std::size_t position;  // byte offset where parsing stopped
  std::string detail;
};

std::string_view to_string(FormatError::Kind k);
std::string describe(const FormatError& e);

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// "BBC1" || 0x01 || TLV entries (tag(1) || length(4, BE) || value), tags
// 0x01..0x04 in ascending order.
Bytes serialize_record(const DeviceRecord& r);
Expected<DeviceRecord, FormatError> parse_record(ByteView bytes);

// Throws IoError when the stream rejects the write.
std::size_t save_record(const DeviceRecord& r, std::ostream& sink);
Expected<DeviceRecord, FormatError> load_record(std::istream& source);

void save_record_file(const DeviceRecord& r, const std::string& path);
Expected<DeviceRecord, FormatError> load_record_file(const std::string& path);

}  // namespace bbcreds

#endif  // BBCREDS_STORE_HPP
