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

#ifndef ANDROSCAN_DEX_H_
#define ANDROSCAN_DEX_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "androscan/byte_reader.h"

namespace androscan {

struct MethodRef {
  std::string class_descriptor;
  std::string name;
};

struct DexClass {
  std::string descriptor;
  // Indices into DexFile::method_refs invoked from this class's code, in
  // bytecode order (may repeat).
  std::vector<uint32_t> invoked_methods;
  // Indices into DexFile::strings loaded by const-string.
  std::vector<uint32_t> const_strings;
};

struct DexFile {
  std::string version;  // "035", "039", ...
  uint32_t string_count = 0;
  std::vector<std::string> strings;
  std::vector<bool> string_malformed;
  std::vector<std::string> type_names;
  std::vector<MethodRef> method_refs;
  std::vector<DexClass> classes;
  // Strings that are identifiers (type descriptors, member names, shorties).
  std::vector<bool> string_is_identifier;
  std::vector<std::string> warnings;
};

// Throws Error(kBadMagic | kBadHeader | kTruncatedData).
DexFile ParseDex(Bytes data);

struct UrlCandidate {
  std::string url;
  uint32_t string_index = 0;
  bool low_confidence = false;  // schemeless host/path heuristic
  bool truncated = false;       // source string exceeded the scan cap
};

inline constexpr size_t kUrlScanCap = 64 * 1024;

// http(s) URLs and schemeless "host.tld/path" strings, in string order.
std::vector<UrlCandidate> ExtractUrls(const DexFile& dex);
// content://, file://, android.resource:// strings (not scan targets).
std::vector<UrlCandidate> ExtractLocalUris(const DexFile& dex);
// Same rules applied to a single string; false when it is not a candidate.
bool MatchNetworkUrl(std::string_view s, UrlCandidate* out);

struct EntryPointList {
  std::set<std::string> names;

  static EntryPointList Bundled();
  // One simple class name per line; '#' starts a comment.
  static EntryPointList Parse(std::string_view text);
};

struct EntryPointRef {
  std::string entry_point;       // simple class name, e.g. "URL"
  std::string class_descriptor;  // full descriptor of the referenced class
  std::string referencing_class; // first app class invoking it, or "<unknown>"
  std::string method_name;
};

// "Ljava/net/URL;" -> "URL"
std::string SimpleClassName(std::string_view descriptor);

// One ref per method_ref whose class simple name is in eps and whose class is
// not defined by the app itself (app_classes; defaults to this DEX's own
// class_defs when null).
std::vector<EntryPointRef> FindEntryPointRefs(const DexFile& dex, const EntryPointList& eps,
                                              const std::set<std::string>* app_classes = nullptr);

}  // namespace androscan

#endif  // ANDROSCAN_DEX_H_
