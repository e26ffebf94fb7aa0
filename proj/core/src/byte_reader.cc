/*
 * Copyright (C) 2026 The Androscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "androscan/byte_reader.h"

#include <string>

namespace androscan {

bool ByteReader::Contains(size_t off, size_t len) const {
  return off <= data_.size() && len <= data_.size() - off;
}

void ByteReader::Require(size_t off, size_t len) const {
  if (!Contains(off, len)) Fail("read past end", off);
}

void ByteReader::Fail(const char* what, size_t off) const {
  throw Error(code_, std::string(what) + " at offset " + std::to_string(off) + " (size " +
                         std::to_string(data_.size()) + ")");
}

uint8_t ByteReader::U8(size_t off) const {
  Require(off, 1);
  return data_[off];
}

uint16_t ByteReader::U16(size_t off) const {
  Require(off, 2);
  return static_cast<uint16_t>(data_[off] | (data_[off + 1] << 8));
}

uint32_t ByteReader::U32(size_t off) const {
  Require(off, 4);
  return static_cast<uint32_t>(data_[off]) | (static_cast<uint32_t>(data_[off + 1]) << 8) |
         (static_cast<uint32_t>(data_[off + 2]) << 16) |
         (static_cast<uint32_t>(data_[off + 3]) << 24);
}

uint64_t ByteReader::U64(size_t off) const {
  return static_cast<uint64_t>(U32(off)) | (static_cast<uint64_t>(U32(off + 4)) << 32);
}

Bytes ByteReader::Slice(size_t off, size_t len) const {
  Require(off, len);
  return data_.subspan(off, len);
}

std::string_view ByteReader::Chars(size_t off, size_t len) const {
  Require(off, len);
  return {reinterpret_cast<const char*>(data_.data()) + off, len};
}

uint32_t ByteReader::Uleb128(size_t& off) const {
  uint32_t result = 0;
  for (int i = 0; i < 5; ++i) {
    uint8_t b = U8(off++);
    result |= static_cast<uint32_t>(b & 0x7f) << (7 * i);
    if ((b & 0x80) == 0) return result;
  }
  Fail("uleb128 longer than 5 bytes", off);
}

int32_t ByteReader::Sleb128(size_t& off) const {
  uint32_t result = 0;
  int shift = 0;
  for (int i = 0; i < 5; ++i) {
    uint8_t b = U8(off++);
    result |= static_cast<uint32_t>(b & 0x7f) << shift;
    shift += 7;
    if ((b & 0x80) == 0) {
      if (shift < 32 && (b & 0x40)) result |= ~0u << shift;
      return static_cast<int32_t>(result);
    }
  }
  Fail("sleb128 longer than 5 bytes", off);
}

}  // namespace androscan
