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

#ifndef ANDROSCAN_TEXT_H_
#define ANDROSCAN_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace androscan {

std::string ToLower(std::string_view s);
bool EqualsIgnoreCase(std::string_view a, std::string_view b);
bool ContainsIgnoreCase(std::string_view haystack, std::string_view needle);
std::string_view Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);

// Appends the UTF-8 encoding of a code point; invalid code points become U+FFFD.
void AppendUtf8(std::string& out, uint32_t cp);

// Decodes UTF-16LE code units. Unpaired surrogates become U+FFFD and set
// *malformed when non-null.
std::string Utf16ToUtf8(const std::vector<uint16_t>& units, bool* malformed);

// Validates UTF-8; invalid sequences are replaced with U+FFFD.
std::string SanitizeUtf8(std::string_view s, bool* malformed);

// True when every byte is printable ASCII or valid multi-byte UTF-8, with
// tab/CR/LF permitted.
bool IsPrintableText(std::string_view s);
bool HasWhitespace(std::string_view s);

std::string PercentDecode(std::string_view s, bool plus_as_space);
// Encodes everything outside the RFC 3986 unreserved set.
std::string PercentEncode(std::string_view s);

std::string HexEncode(const uint8_t* data, size_t len);
std::string Base64Encode(std::string_view data);
// Returns false on malformed input.
bool Base64Decode(std::string_view in, std::string* out);

// Lowercase ASCII with everything but [a-z0-9] removed ("Urban-Airship" ->
// "urbanairship").
std::string StripPunctuation(std::string_view s);

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string UtcNowIso8601();

}  // namespace androscan

#endif  // ANDROSCAN_TEXT_H_
