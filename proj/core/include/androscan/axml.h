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

#ifndef ANDROSCAN_AXML_H_
#define ANDROSCAN_AXML_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "androscan/byte_reader.h"

namespace androscan {

inline constexpr uint32_t kNoIndex = 0xFFFFFFFF;

struct AxmlStringPool {
  std::vector<std::string> strings;
  std::vector<bool> malformed;  // per string: replacement-decoded
  bool utf8 = false;
  uint32_t style_count = 0;

  // Empty string for kNoIndex; throws MalformedChunk for other bad indices.
  const std::string& At(uint32_t index) const;
};

// Decodes the string pool chunk (type 0x0001) at offset.
AxmlStringPool DecodeStringPool(Bytes data, size_t offset);

struct XmlAttribute {
  std::string ns;
  std::string name;
  uint32_t resource_id = 0;  // 0 when the resource map has no entry
  std::string value;         // rendered: strings verbatim, "@0x%08x", decimal, true/false
  uint8_t type = 0;
};

struct XmlElement {
  std::string ns;
  std::string name;
  std::vector<XmlAttribute> attributes;
  std::vector<XmlElement> children;
  std::string text;

  // Matches by local name, preferring the android namespace; falls back to
  // the android.R.attr id when names were stripped.
  const XmlAttribute* Attr(std::string_view local_name, uint32_t resource_id = 0) const;
};

struct AxmlDocument {
  AxmlStringPool pool;
  std::vector<uint32_t> resource_map;
  XmlElement root;
  std::vector<std::string> warnings;
};

// Full chunk walk. Throws Error(kNotAxml | kMalformedChunk).
AxmlDocument DecodeAxml(Bytes data);

struct Component {
  std::string kind;  // activity | service | receiver | provider
  std::string class_name;
};

struct ManifestInfo {
  std::string package_name;
  std::vector<std::string> permissions;  // sorted, unique
  std::vector<Component> components;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::optional<int> min_sdk;
  std::optional<int> target_sdk;
  std::vector<std::string> warnings;
};

ManifestInfo DecodeManifest(Bytes data);

// ".Foo" and "Foo" are relative to the package; dotted names are absolute.
std::string ResolveClassName(const std::string& package, const std::string& name);

}  // namespace androscan

#endif  // ANDROSCAN_AXML_H_
