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

#include "androscan/error.h"

#include "androscan/version.h"

namespace androscan {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotAZip: return "NotAZip";
    case ErrorCode::kNoManifest: return "NoManifest";
    case ErrorCode::kEntryNotFound: return "EntryNotFound";
    case ErrorCode::kCorruptEntry: return "CorruptEntry";
    case ErrorCode::kNotAxml: return "NotAxml";
    case ErrorCode::kMalformedChunk: return "MalformedChunk";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kTruncatedData: return "TruncatedData";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kFileUnreadable: return "FileUnreadable";
    case ErrorCode::kAllLinesMalformed: return "AllLinesMalformed";
    case ErrorCode::kPortInUse: return "PortInUse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnparseableBody: return "UnparseableBody";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code) {}

const char* Version() { return ANDROSCAN_VERSION; }

}  // namespace androscan
