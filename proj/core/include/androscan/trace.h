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

#ifndef ANDROSCAN_TRACE_H_
#define ANDROSCAN_TRACE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace androscan {

struct KeyValue {
  std::string key;
  std::string value;

  bool operator==(const KeyValue&) const = default;
};

enum class ParamLocation { kQuery, kBody, kHeader, kPath };

const char* ParamLocationName(ParamLocation loc);
// Throws Error(kInvalidArgument) for unknown names.
ParamLocation ParseParamLocation(std::string_view name);

struct ApiCallTrace {
  std::string timestamp;
  std::string api;
  std::optional<std::string> url;
  std::optional<std::string> method;
  std::vector<KeyValue> headers;       // duplicates merged case-insensitively
  std::vector<KeyValue> query_params;  // decoded from url
  std::optional<std::string> body;     // exact bytes
  bool body_binary = false;            // body arrived as body_b64
  std::vector<std::string> raw_args;
  size_t line = 0;

  bool operator==(const ApiCallTrace&) const = default;
};

struct TraceParam {
  std::string name;
  ParamLocation location = ParamLocation::kQuery;
  std::string value;
};

enum class BodyEncoding { kNone, kForm, kJson, kOpaque };
const char* BodyEncodingName(BodyEncoding e);

// Decoded body fields: url-encoded forms and JSON objects (nested objects
// flattened one level with dotted paths). Other bodies yield no fields.
std::vector<TraceParam> ParseBodyParams(const ApiCallTrace& trace, BodyEncoding* encoding);

// Query, body and non-transport header parameters of one trace.
std::vector<TraceParam> TraceParams(const ApiCallTrace& trace);

struct TraceFile {
  std::vector<ApiCallTrace> traces;
  size_t malformed_count = 0;
  std::vector<std::string> diagnostics;  // one per malformed line
};

// Throws Error(kFileUnreadable | kAllLinesMalformed).
TraceFile ParseTraceFile(const std::filesystem::path& path);
TraceFile ParseTraceText(std::string_view text);
// Parses one NDJSON record; throws Error(kInvalidArgument) when malformed.
ApiCallTrace ParseTraceLine(std::string_view line);
// Inverse of ParseTraceLine (single line, no trailing newline).
std::string SerializeTrace(const ApiCallTrace& trace);

struct ParamFlag {
  std::string param_path;  // "<location>:<name>", e.g. "body:newpassword"
  bool encrypted_suspect = false;
  double entropy_bits_per_char = 0;
};

// Encrypted-looking: length >= 16 and (a non-printable byte, or entropy >=
// 4.0 with no whitespace).
bool LooksEncrypted(std::string_view value, double* entropy = nullptr);
std::vector<ParamFlag> FlagEncryptedParams(const ApiCallTrace& trace);

// Host, Content-Length, Content-Type, Connection, Accept*, User-Agent, ...
bool IsTransportHeader(std::string_view name);

}  // namespace androscan

#endif  // ANDROSCAN_TRACE_H_
