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

#ifndef ANDROSCAN_ERROR_H_
#define ANDROSCAN_ERROR_H_

#include <stdexcept>
#include <string>

namespace androscan {

enum class ErrorCode {
  kNotAZip,
  kNoManifest,
  kEntryNotFound,
  kCorruptEntry,
  kNotAxml,
  kMalformedChunk,
  kBadMagic,
  kBadHeader,
  kTruncatedData,
  kEmptyInput,
  kFileUnreadable,
  kAllLinesMalformed,
  kPortInUse,
  kInvalidArgument,
  kUnparseableBody,
  kIoError,
};

// Stable name used in diagnostics, e.g. "NotAZip".
const char* ErrorCodeName(ErrorCode code);

// The only exception type thrown by the library. Every failure on hostile
// input surfaces as one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace androscan

#endif  // ANDROSCAN_ERROR_H_
