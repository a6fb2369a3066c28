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

#include "bbcreds/store.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>

namespace bbcreds {

namespace {

constexpr std::size_t kTagCount = 4;

void put_entry(ByteWriter& w, RecordTag tag, ByteView value) {
  w.u8(static_cast<std::uint8_t>(tag));
  w.u32(static_cast<std::uint32_t>(value.size()));
  w.bytes(value);
}

FormatError fail(FormatError::Kind kind, std::size_t pos, std::string detail) {
  return FormatError{kind, pos, std::move(detail)};
}

}  // namespace

std::string_view to_string(FormatError::Kind k) {
  switch (k) {
    case FormatError::Kind::BadMagic: return "BadMagic";
    case FormatError::Kind::BadVersion: return "BadVersion";
    case FormatError::Kind::DuplicateTag: return "DuplicateTag";
    case FormatError::Kind::UnknownTag: return "UnknownTag";
    case FormatError::Kind::Truncated: return "Truncated";
    case FormatError::Kind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

std::string describe(const FormatError& e) {
  std::string out(to_string(e.kind));
  out += " at byte " + std::to_string(e.position);
  if (!e.detail.empty()) out += ": " + e.detail;
  return out;
}

Bytes serialize_record(const DeviceRecord& r) {
  ByteWriter w;
  w.bytes(kRecordMagic);
  w.u8(kRecordFormatVersion);
  put_entry(w, RecordTag::HelperData, encode_helper(r.helper));
  put_entry(w, RecordTag::Sketch, encode_sketch(r.sketch));
  put_entry(w, RecordTag::KeyDigest, r.digest.digest);
  put_entry(w, RecordTag::BoundCredential, encode_bound(r.bound));
  return std::move(w).take();
}

Expected<DeviceRecord, FormatError> parse_record(ByteView bytes) {
  using K = FormatError::Kind;
  ByteReader r(bytes);

  auto magic = r.array<4>();
  if (!magic) {
    // A short prefix of the real magic is a truncated file; anything else
    // is not ours.
    bool prefix = std::equal(bytes.begin(), bytes.end(), kRecordMagic.begin());
    return fail(prefix ? K::Truncated : K::BadMagic, 0, "file shorter than magic");
  }
  if (*magic != kRecordMagic) return fail(K::BadMagic, 0, "expected BBC1");
  auto version = r.u8();
  if (!version) return fail(K::Truncated, r.position(), "missing version byte");
  if (*version != kRecordFormatVersion)
    return fail(K::BadVersion, 4, "format version " + std::to_string(*version));

  std::array<std::optional<ByteView>, kTagCount> values;
  int last_tag = 0;
  while (!r.at_end()) {
    const std::size_t entry_pos = r.position();
    auto tag = r.u8();
    auto len = r.u32();
    if (!tag || !len)
      return fail(K::Truncated, entry_pos, "incomplete entry header");
    if (*tag == 0 || *tag > kTagCount)
      return fail(K::UnknownTag, entry_pos, "tag " + std::to_string(*tag));
    if (values[*tag - 1])
      return fail(K::DuplicateTag, entry_pos, "tag " + std::to_string(*tag));
    if (*tag < last_tag)
      return fail(K::InvariantViolation, entry_pos, "tags out of order");
    auto value = r.bytes(*len);
    if (!value)
      return fail(K::Truncated, r.position(),
                  "entry declares " + std::to_string(*len) + " bytes, " +
                      std::to_string(r.remaining()) + " remain");
    values[*tag - 1] = *value;
    last_tag = *tag;
  }

  for (std::size_t i = 0; i < kTagCount; ++i)
    if (!values[i])
      return fail(K::InvariantViolation, bytes.size(),
                  "missing tag " + std::to_string(i + 1));

  DeviceRecord rec;
  auto helper = decode_helper(*values[0]);
  if (!helper) return fail(K::InvariantViolation, 0, "invalid helper data");
  auto sketch = decode_sketch(*values[1]);
  if (!sketch) return fail(K::InvariantViolation, 0, "invalid sketch");
  if (values[2]->size() != kDigestBytes)
    return fail(K::InvariantViolation, 0, "digest must be 32 bytes");
  auto bound = decode_bound(*values[3]);
  if (!bound) return fail(K::InvariantViolation, 0, "invalid bound credential");

  rec.helper = std::move(*helper);
  rec.sketch = std::move(*sketch);
  std::copy(values[2]->begin(), values[2]->end(), rec.digest.digest.begin());
  rec.bound = std::move(*bound);
  return rec;
}

std::size_t save_record(const DeviceRecord& r, std::ostream& sink) {
  Bytes data = serialize_record(r);
  sink.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size()));
  sink.flush();
  if (!sink) throw IoError("failed to write device record");
  return data.size();
}

Expected<DeviceRecord, FormatError> load_record(std::istream& source) {
  Bytes data{std::istreambuf_iterator<char>(source),
             std::istreambuf_iterator<char>()};
  return parse_record(data);
}

void save_record_file(const DeviceRecord& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  save_record(r, out);
}

Expected<DeviceRecord, FormatError> load_record_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return load_record(in);
}

}  // namespace bbcreds
