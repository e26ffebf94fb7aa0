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

#include "androscan/dex.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

#include "androscan/embedded.h"
#include "androscan/error.h"
#include "androscan/text.h"
#include "androscan/url.h"

namespace androscan {

namespace {

constexpr size_t kHeaderSize = 0x70;
constexpr uint32_t kEndianTag = 0x12345678;

// Instruction widths in 16-bit code units, indexed by opcode.
constexpr std::array<uint8_t, 256> MakeWidths() {
  std::array<uint8_t, 256> w{};
  auto set = [&](int lo, int hi, uint8_t v) {
    for (int i = lo; i <= hi; ++i) w[i] = v;
  };
  set(0x00, 0xff, 1);
  set(0x02, 0x02, 2);
  set(0x03, 0x03, 3);
  set(0x05, 0x05, 2);
  set(0x06, 0x06, 3);
  set(0x08, 0x08, 2);
  set(0x09, 0x09, 3);
  set(0x13, 0x13, 2);
  set(0x14, 0x14, 3);
  set(0x15, 0x16, 2);
  set(0x17, 0x17, 3);
  set(0x18, 0x18, 5);
  set(0x19, 0x19, 2);
  set(0x1a, 0x1a, 2);
  set(0x1b, 0x1b, 3);
  set(0x1c, 0x1c, 2);
  set(0x1f, 0x20, 2);
  set(0x22, 0x23, 2);
  set(0x24, 0x26, 3);
  set(0x29, 0x29, 2);
  set(0x2a, 0x2c, 3);
  set(0x2d, 0x3d, 2);
  set(0x44, 0x6d, 2);
  set(0x6e, 0x72, 3);
  set(0x74, 0x78, 3);
  set(0x90, 0xaf, 2);
  set(0xd0, 0xe2, 2);
  set(0xfa, 0xfb, 4);
  set(0xfc, 0xfd, 3);
  set(0xfe, 0xff, 2);
  return w;
}

constexpr std::array<uint8_t, 256> kWidths = MakeWidths();

bool IsInvoke(uint8_t op) {
  return (op >= 0x6e && op <= 0x72) || (op >= 0x74 && op <= 0x78) || op == 0xfa || op == 0xfb;
}

[[noreturn]] void BadHeader(const std::string& what) { throw Error(ErrorCode::kBadHeader, what); }

// Decodes a MUTF-8 string starting at off; stops at NUL.
std::string DecodeMutf8(const ByteReader& r, size_t off, bool* malformed) {
  std::vector<uint16_t> units;
  size_t n = r.size();
  auto cont = [&](size_t k) { return k < n && (r.U8(k) & 0xC0) == 0x80; };
  while (true) {
    if (off >= n) {
      *malformed = true;  // unterminated
      break;
    }
    uint8_t b = r.U8(off);
    if (b == 0) break;
    if (b < 0x80) {
      units.push_back(b);
      off += 1;
    } else if ((b & 0xE0) == 0xC0 && cont(off + 1)) {
      units.push_back(static_cast<uint16_t>(((b & 0x1F) << 6) | (r.U8(off + 1) & 0x3F)));
      off += 2;
    } else if ((b & 0xF0) == 0xE0 && cont(off + 1) && cont(off + 2)) {
      units.push_back(static_cast<uint16_t>(((b & 0x0F) << 12) | ((r.U8(off + 1) & 0x3F) << 6) |
                                            (r.U8(off + 2) & 0x3F)));
      off += 3;
    } else if ((b & 0xF8) == 0xF0 && cont(off + 1) && cont(off + 2) && cont(off + 3)) {
      // Standard 4-byte UTF-8 is not legal MUTF-8; accept it but flag.
      uint32_t cp = ((b & 0x07u) << 18) | ((r.U8(off + 1) & 0x3Fu) << 12) |
                    ((r.U8(off + 2) & 0x3Fu) << 6) | (r.U8(off + 3) & 0x3Fu);
      *malformed = true;
      if (cp >= 0x10000 && cp <= 0x10FFFF) {
        cp -= 0x10000;
        units.push_back(static_cast<uint16_t>(0xD800 + (cp >> 10)));
        units.push_back(static_cast<uint16_t>(0xDC00 + (cp & 0x3FF)));
      } else {
        units.push_back(0xFFFD);
      }
      off += 4;
    } else {
      units.push_back(0xFFFD);
      *malformed = true;
      off += 1;
    }
  }
  return Utf16ToUtf8(units, malformed);
}

struct Table {
  uint32_t size;
  uint32_t off;
};

Table ReadTable(const ByteReader& r, size_t header_off, size_t entry_size, const char* name) {
  Table t{r.U32(header_off), r.U32(header_off + 4)};
  if (t.size == 0) return t;
  if (!r.Contains(t.off, static_cast<size_t>(t.size) * entry_size)) {
    throw Error(ErrorCode::kTruncatedData, std::string(name) + " table outside the file");
  }
  return t;
}

void WalkCode(const ByteReader& r, size_t code_off, DexFile& dex, DexClass& cls) {
  uint32_t insns_size = r.U32(code_off + 12);
  size_t insns = code_off + 16;
  r.Require(insns, static_cast<size_t>(insns_size) * 2);
  auto unit = [&](size_t pc) -> uint32_t { return r.U16(insns + 2 * pc); };
  size_t pc = 0;
  while (pc < insns_size) {
    uint32_t u = unit(pc);
    uint8_t op = u & 0xFF;
    size_t width = kWidths[op];
    if (op == 0x00 && u != 0) {
      // Payload pseudo-instructions; sizes must be read before they can be skipped.
      if (u == 0x0100 && pc + 1 < insns_size) {
        width = 4 + static_cast<size_t>(unit(pc + 1)) * 2;
      } else if (u == 0x0200 && pc + 1 < insns_size) {
        width = 2 + static_cast<size_t>(unit(pc + 1)) * 4;
      } else if (u == 0x0300 && pc + 3 < insns_size) {
        uint64_t elem = unit(pc + 1);
        uint64_t count = unit(pc + 2) | (static_cast<uint64_t>(unit(pc + 3)) << 16);
        width = static_cast<size_t>(4 + (elem * count + 1) / 2);
      }
    }
    if (pc + width > insns_size) {
      dex.warnings.push_back(cls.descriptor + ": instruction overruns code item");
      return;
    }
    if (IsInvoke(op)) {
      uint32_t m = unit(pc + 1);
      if (m < dex.method_refs.size()) cls.invoked_methods.push_back(m);
    } else if (op == 0x1a) {
      uint32_t s = unit(pc + 1);
      if (s < dex.strings.size()) cls.const_strings.push_back(s);
    } else if (op == 0x1b) {
      uint32_t s = unit(pc + 1) | (unit(pc + 2) << 16);
      if (s < dex.strings.size()) cls.const_strings.push_back(s);
    }
    pc += width;
  }
}

void WalkClassData(const ByteReader& r, size_t off, DexFile& dex, DexClass& cls) {
  uint32_t static_fields = r.Uleb128(off);
  uint32_t instance_fields = r.Uleb128(off);
  uint32_t direct_methods = r.Uleb128(off);
  uint32_t virtual_methods = r.Uleb128(off);
  // Every encoded member takes at least two bytes.
  uint64_t members = static_cast<uint64_t>(static_fields) + instance_fields + direct_methods +
                     virtual_methods;
  if (members * 2 > r.size()) throw Error(ErrorCode::kTruncatedData, "class_data member counts");
  for (uint64_t i = 0; i < static_cast<uint64_t>(static_fields) + instance_fields; ++i) {
    r.Uleb128(off);
    r.Uleb128(off);
  }
  for (uint32_t list : {direct_methods, virtual_methods}) {
    for (uint32_t i = 0; i < list; ++i) {
      r.Uleb128(off);  // method_idx_diff; the code walk does not need the id
      r.Uleb128(off);  // access flags
      uint32_t code_off = r.Uleb128(off);
      if (code_off != 0) {
        r.Require(code_off, 16);
        WalkCode(r, code_off, dex, cls);
      }
    }
  }
}

const char* const kTlds[] = {
    "com", "net", "org", "io",  "co",  "in",   "dev",   "app", "me",  "info", "biz",
    "us",  "uk",  "de",  "cn",  "jp",  "ru",   "br",    "fr",  "it",  "nl",   "au",
    "ca",  "es",  "kr",  "tv",  "xyz", "ai",   "cloud", "gov", "edu", "mobi", "site",
    "online", "tech", "ly", "gl", "sg", "hk",  "id",    "vn",  "tw",  "pk",   "local"};

bool IsKnownTld(std::string_view label) {
  for (const char* t : kTlds) {
    if (label == t) return true;
  }
  return false;
}

bool HasPrefixIgnoreCase(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && EqualsIgnoreCase(s.substr(0, prefix.size()), prefix);
}

bool IsLocalUri(std::string_view s) {
  return HasPrefixIgnoreCase(s, "content://") || HasPrefixIgnoreCase(s, "file://") ||
         HasPrefixIgnoreCase(s, "android.resource://");
}

}  // namespace

DexFile ParseDex(Bytes data) {
  ByteReader r(data, ErrorCode::kTruncatedData);
  static constexpr char kMagic[] = {'d', 'e', 'x', '\n'};
  if (data.size() < 8 || !std::equal(kMagic, kMagic + 4, data.begin()) ||
      !std::isdigit(data[4]) || !std::isdigit(data[5]) || !std::isdigit(data[6]) || data[7] != 0) {
    throw Error(ErrorCode::kBadMagic, "not a dex file");
  }
  if (data.size() < kHeaderSize) throw Error(ErrorCode::kTruncatedData, "dex header truncated");
  DexFile dex;
  dex.version = std::string(data.begin() + 4, data.begin() + 7);
  if (r.U32(36) != kHeaderSize) BadHeader("header_size is not 0x70");
  if (r.U32(40) != kEndianTag) BadHeader("unsupported endian tag");
  uint32_t file_size = r.U32(32);
  if (file_size < kHeaderSize) BadHeader("file_size smaller than the header");
  if (file_size > data.size()) throw Error(ErrorCode::kTruncatedData, "file shorter than file_size");
  if (file_size < data.size()) {
    dex.warnings.push_back("ignoring bytes past file_size");
    r = ByteReader(data.subspan(0, file_size), ErrorCode::kTruncatedData);
  }

  Table string_ids = ReadTable(r, 56, 4, "string_ids");
  Table type_ids = ReadTable(r, 64, 4, "type_ids");
  Table proto_ids = ReadTable(r, 72, 12, "proto_ids");
  Table field_ids = ReadTable(r, 80, 8, "field_ids");
  Table method_ids = ReadTable(r, 88, 8, "method_ids");
  Table class_defs = ReadTable(r, 96, 32, "class_defs");

  dex.string_count = string_ids.size;
  dex.strings.reserve(string_ids.size);
  dex.string_malformed.reserve(string_ids.size);
  for (uint32_t i = 0; i < string_ids.size; ++i) {
    size_t off = r.U32(string_ids.off + 4ull * i);
    r.Require(off, 1);
    r.Uleb128(off);  // utf16 length
    bool bad = false;
    dex.strings.push_back(DecodeMutf8(r, off, &bad));
    dex.string_malformed.push_back(bad);
  }
  dex.string_is_identifier.assign(dex.strings.size(), false);
  auto string_at = [&](uint32_t idx, const char* what) -> const std::string& {
    if (idx >= dex.strings.size()) BadHeader(std::string(what) + " string index out of range");
    dex.string_is_identifier[idx] = true;
    return dex.strings[idx];
  };

  dex.type_names.reserve(type_ids.size);
  for (uint32_t i = 0; i < type_ids.size; ++i) {
    dex.type_names.push_back(string_at(r.U32(type_ids.off + 4ull * i), "type_id"));
  }
  auto type_at = [&](uint32_t idx) -> const std::string& {
    if (idx >= dex.type_names.size()) BadHeader("type index out of range");
    return dex.type_names[idx];
  };
  for (uint32_t i = 0; i < proto_ids.size; ++i) {
    string_at(r.U32(proto_ids.off + 12ull * i), "proto shorty");
  }
  for (uint32_t i = 0; i < field_ids.size; ++i) {
    string_at(r.U32(field_ids.off + 8ull * i + 4), "field name");
  }
  dex.method_refs.reserve(method_ids.size);
  for (uint32_t i = 0; i < method_ids.size; ++i) {
    size_t m = method_ids.off + 8ull * i;
    // Both lookups can throw; resolve them before building the aggregate
    // (gcc 11 leaks already-built members of a braced temporary on throw).
    const std::string& cls = type_at(r.U16(m));
    const std::string& name = string_at(r.U32(m + 4), "method name");
    dex.method_refs.push_back({cls, name});
  }
  dex.classes.reserve(class_defs.size);
  for (uint32_t i = 0; i < class_defs.size; ++i) {
    size_t c = class_defs.off + 32ull * i;
    DexClass cls;
    cls.descriptor = type_at(r.U32(c));
    uint32_t source_file = r.U32(c + 16);
    if (source_file != 0xFFFFFFFF) string_at(source_file, "source file");
    uint32_t class_data = r.U32(c + 24);
    if (class_data != 0) WalkClassData(r, class_data, dex, cls);
    dex.classes.push_back(std::move(cls));
  }
  return dex;
}

bool MatchNetworkUrl(std::string_view s, UrlCandidate* out) {
  bool truncated = false;
  if (s.size() > kUrlScanCap) {
    s = s.substr(0, kUrlScanCap);
    truncated = true;
  }
  UrlCandidate c;
  c.truncated = truncated;
  if (HasPrefixIgnoreCase(s, "http://") || HasPrefixIgnoreCase(s, "https://")) {
    if (!ParseHttpUrl(s)) return false;
    c.url = std::string(s);
  } else {
    if (s.find("://") != std::string_view::npos || IsLocalUri(s)) return false;
    size_t slash = s.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 >= s.size()) return false;
    std::string_view host = s.substr(0, slash);
    if (!IsPlausibleHost(host) || ToLower(host) != host) return false;
    size_t dot = host.rfind('.');
    if (!IsKnownTld(host.substr(dot + 1))) return false;
    if (!ParseHttpUrl(std::string("https://") + std::string(s))) return false;
    c.url = std::string(s);
    c.low_confidence = true;
  }
  if (out) *out = std::move(c);
  return true;
}

std::vector<UrlCandidate> ExtractUrls(const DexFile& dex) {
  std::vector<UrlCandidate> out;
  for (uint32_t i = 0; i < dex.strings.size(); ++i) {
    UrlCandidate c;
    if (MatchNetworkUrl(dex.strings[i], &c)) {
      c.string_index = i;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<UrlCandidate> ExtractLocalUris(const DexFile& dex) {
  std::vector<UrlCandidate> out;
  for (uint32_t i = 0; i < dex.strings.size(); ++i) {
    if (IsLocalUri(dex.strings[i])) {
      UrlCandidate c;
      c.url = dex.strings[i].substr(0, kUrlScanCap);
      c.truncated = dex.strings[i].size() > kUrlScanCap;
      c.string_index = i;
      out.push_back(std::move(c));
    }
  }
  return out;
}

EntryPointList EntryPointList::Parse(std::string_view text) {
  EntryPointList eps;
  for (const auto& raw : Split(text, '\n')) {
    std::string_view line = raw;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (!line.empty()) eps.names.emplace(line);
  }
  if (eps.names.empty()) throw Error(ErrorCode::kInvalidArgument, "entry-point list is empty");
  return eps;
}

EntryPointList EntryPointList::Bundled() {
  static const EntryPointList kBundled = Parse(EmbeddedFile("entrypoints.txt").value());
  return kBundled;
}

std::string SimpleClassName(std::string_view descriptor) {
  while (!descriptor.empty() && descriptor.front() == '[') descriptor.remove_prefix(1);
  if (descriptor.size() >= 2 && descriptor.front() == 'L' && descriptor.back() == ';') {
    descriptor = descriptor.substr(1, descriptor.size() - 2);
  }
  size_t slash = descriptor.rfind('/');
  return std::string(slash == std::string_view::npos ? descriptor : descriptor.substr(slash + 1));
}

std::vector<EntryPointRef> FindEntryPointRefs(const DexFile& dex, const EntryPointList& eps,
                                              const std::set<std::string>* app_classes) {
  std::set<std::string> own;
  if (!app_classes) {
    for (const auto& c : dex.classes) own.insert(c.descriptor);
    app_classes = &own;
  }
  std::unordered_map<uint32_t, const std::string*> first_caller;
  for (const auto& c : dex.classes) {
    for (uint32_t m : c.invoked_methods) first_caller.emplace(m, &c.descriptor);
  }
  std::vector<EntryPointRef> out;
  for (uint32_t i = 0; i < dex.method_refs.size(); ++i) {
    const MethodRef& ref = dex.method_refs[i];
    std::string simple = SimpleClassName(ref.class_descriptor);
    if (!eps.names.count(simple) || app_classes->count(ref.class_descriptor)) continue;
    auto it = first_caller.find(i);
    out.push_back({simple, ref.class_descriptor, it == first_caller.end() ? "<unknown>" : *it->second,
                   ref.name});
  }
  return out;
}

}  // namespace androscan
