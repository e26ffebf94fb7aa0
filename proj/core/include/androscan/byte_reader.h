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

#ifndef ANDROSCAN_BYTE_READER_H_
#define ANDROSCAN_BYTE_READER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "androscan/error.h"

namespace androscan {

using Bytes = std::span<const uint8_t>;

// Little-endian, bounds-checked reads over an immutable buffer. Any access
// past the end throws Error(code) where code is chosen by the owner, so each
// format reports its own error kind.
class ByteReader {
 public:
  ByteReader(Bytes data, ErrorCode code) : data_(data), code_(code) {}

  size_t size() const { return data_.size(); }
  Bytes data() const { return data_; }

  uint8_t U8(size_t off) const;
  uint16_t U16(size_t off) const;
  uint32_t U32(size_t off) const;
  uint64_t U64(size_t off) const;

  // Throws unless [off, off + len) lies inside the buffer.
  void Require(size_t off, size_t len) const;
  bool Contains(size_t off, size_t len) const;
  Bytes Slice(size_t off, size_t len) const;
  std::string_view Chars(size_t off, size_t len) const;

  // Reads an unsigned LEB128 value (at most 5 bytes) and advances off.
  uint32_t Uleb128(size_t& off) const;
  // Signed LEB128 (at most 5 bytes).
  int32_t Sleb128(size_t& off) const;

  [[noreturn]] void Fail(const char* what, size_t off) const;

 private:
  Bytes data_;
  ErrorCode code_;
};

}  // namespace androscan

#endif  // ANDROSCAN_BYTE_READER_H_
