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

#include "androscan/axml.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <functional>

#include "androscan/error.h"
#include "androscan/text.h"

namespace androscan {

namespace {

constexpr uint16_t kChunkStringPool = 0x0001;
constexpr uint16_t kChunkXml = 0x0003;
constexpr uint16_t kChunkStartNamespace = 0x0100;
constexpr uint16_t kChunkEndNamespace = 0x0101;
constexpr uint16_t kChunkStartElement = 0x0102;
constexpr uint16_t kChunkEndElement = 0x0103;
constexpr uint16_t kChunkCdata = 0x0104;
constexpr uint16_t kChunkResourceMap = 0x0180;

constexpr uint32_t kUtf8Flag = 0x100;

constexpr uint8_t kTypeNull = 0x00;
constexpr uint8_t kTypeReference = 0x01;
constexpr uint8_t kTypeAttribute = 0x02;
constexpr uint8_t kTypeString = 0x03;
constexpr uint8_t kTypeFloat = 0x04;
constexpr uint8_t kTypeIntDec = 0x10;
constexpr uint8_t kTypeIntHex = 0x11;
constexpr uint8_t kTypeIntBoolean = 0x12;
constexpr uint8_t kTypeFirstColor = 0x1c;
constexpr uint8_t kTypeLastColor = 0x1f;

constexpr std::string_view kAndroidNs = "http://schemas.android.com/apk/res/android";

constexpr uint32_t kAttrName = 0x01010003;
constexpr uint32_t kAttrValue = 0x01010024;
constexpr uint32_t kAttrResource = 0x01010025;
constexpr uint32_t kAttrMinSdk = 0x0101020c;
constexpr uint32_t kAttrTargetSdk = 0x01010270;

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedChunk, what);
}

struct ChunkHeader {
  uint16_t type;
  uint16_t header_size;
  uint32_t size;
};

ChunkHeader ReadChunkHeader(const ByteReader& r, size_t off, size_t limit) {
  if (off + 8 > limit) Malformed("chunk header truncated at " + std::to_string(off));
  ChunkHeader h{r.U16(off), r.U16(off + 2), r.U32(off + 4)};
  if (h.header_size < 8 || h.size < h.header_size || h.size > limit - off) {
    Malformed("bad chunk bounds at " + std::to_string(off));
  }
  return h;
}

std::string Hex32(const char* prefix, uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%s%08x", prefix, v);
  return buf;
}

std::string RenderValue(const AxmlStringPool& pool, uint32_t raw, uint8_t type, uint32_t data) {
  switch (type) {
    case kTypeString:
      return pool.At(raw != kNoIndex ? raw : data);
    case kTypeReference:
      return Hex32("@0x", data);
    case kTypeAttribute:
      return Hex32("?0x", data);
    case kTypeIntDec:
      return std::to_string(static_cast<int32_t>(data));
    case kTypeIntHex:
      return Hex32("0x", data);
    case kTypeIntBoolean:
      return data ? "true" : "false";
    case kTypeFloat: {
      float f;
      static_assert(sizeof(f) == sizeof(data));
      std::memcpy(&f, &data, sizeof(f));
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", static_cast<double>(f));
      return buf;
    }
    case kTypeNull:
      return raw != kNoIndex ? pool.At(raw) : "";
    default:
      if (type >= kTypeFirstColor && type <= kTypeLastColor) return Hex32("#", data);
      return Hex32("0x", data);
  }
}

}  // namespace

const std::string& AxmlStringPool::At(uint32_t index) const {
  static const std::string kEmpty;
  if (index == kNoIndex) return kEmpty;
  if (index >= strings.size()) {
    Malformed("string index " + std::to_string(index) + " out of range (" +
              std::to_string(strings.size()) + ")");
  }
  return strings[index];
}

AxmlStringPool DecodeStringPool(Bytes data, size_t offset) {
  ByteReader r(data, ErrorCode::kMalformedChunk);
  ChunkHeader h = ReadChunkHeader(r, offset, data.size());
  if (h.type != kChunkStringPool) Malformed("expected string pool chunk");
  if (h.header_size < 0x1C) Malformed("string pool header too small");
  uint32_t count = r.U32(offset + 8);
  uint32_t style_count = r.U32(offset + 12);
  uint32_t flags = r.U32(offset + 16);
  uint32_t strings_start = r.U32(offset + 20);
  uint32_t styles_start = r.U32(offset + 24);
  size_t chunk_end = offset + h.size;
  size_t index_start = offset + h.header_size;
  if (count > (h.size - h.header_size) / 4 ||
      style_count > (h.size - h.header_size) / 4 - count) {
    Malformed("string pool counts exceed chunk size");
  }
  AxmlStringPool pool;
  pool.utf8 = (flags & kUtf8Flag) != 0;
  pool.style_count = style_count;
  if (count == 0) return pool;
  size_t data_start = offset + strings_start;
  size_t data_end = chunk_end;
  if (styles_start != 0 && styles_start > strings_start && offset + styles_start <= chunk_end) {
    data_end = offset + styles_start;
  }
  if (strings_start < h.header_size + 4ull * (count + style_count) || data_start > chunk_end) {
    Malformed("string data offset out of range");
  }
  pool.strings.reserve(count);
  pool.malformed.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    size_t p = data_start + r.U32(index_start + 4ull * i);
    if (p >= data_end) Malformed("string " + std::to_string(i) + " offset out of range");
    bool bad = false;
    std::string s;
    if (pool.utf8) {
      auto len8 = [&](size_t& q) -> size_t {
        if (q >= data_end) Malformed("string length truncated");
        uint8_t b = r.U8(q++);
        if (!(b & 0x80)) return b;
        if (q >= data_end) Malformed("string length truncated");
        return ((b & 0x7Fu) << 8) | r.U8(q++);
      };
      len8(p);  // UTF-16 length, unused
      size_t n = len8(p);
      if (n > data_end - p) Malformed("string " + std::to_string(i) + " overruns pool");
      s = SanitizeUtf8(r.Chars(p, n), &bad);
    } else {
      if (p + 2 > data_end) Malformed("string length truncated");
      size_t n = r.U16(p);
      p += 2;
      if (n & 0x8000) {
        if (p + 2 > data_end) Malformed("string length truncated");
        n = ((n & 0x7FFF) << 16) | r.U16(p);
        p += 2;
      }
      if (n > (data_end - p) / 2) Malformed("string " + std::to_string(i) + " overruns pool");
      std::vector<uint16_t> units(n);
      for (size_t k = 0; k < n; ++k) units[k] = r.U16(p + 2 * k);
      s = Utf16ToUtf8(units, &bad);
    }
    pool.strings.push_back(std::move(s));
    pool.malformed.push_back(bad);
  }
  return pool;
}

const XmlAttribute* XmlElement::Attr(std::string_view local_name, uint32_t resource_id) const {
  const XmlAttribute* any_ns = nullptr;
  for (const auto& a : attributes) {
    if (a.name != local_name) continue;
    if (a.ns == kAndroidNs) return &a;
    if (!any_ns) any_ns = &a;
  }
  if (any_ns) return any_ns;
  if (resource_id != 0) {
    for (const auto& a : attributes) {
      if (a.resource_id == resource_id) return &a;
    }
  }
  return nullptr;
}

AxmlDocument DecodeAxml(Bytes data) {
  ByteReader r(data, ErrorCode::kMalformedChunk);
  if (data.size() < 8 || r.U16(0) != kChunkXml) {
    throw Error(ErrorCode::kNotAxml, "leading chunk is not an XML document");
  }
  ChunkHeader doc = ReadChunkHeader(r, 0, data.size());
  AxmlDocument out;
  if (doc.size < data.size()) {
    out.warnings.push_back(std::to_string(data.size() - doc.size) +
                           " trailing bytes after the XML document");
  }
  const size_t end = doc.size;
  bool have_pool = false;
  bool have_root = false;
  std::vector<XmlElement> stack;
  size_t off = doc.header_size;
  while (off < end) {
    ChunkHeader h = ReadChunkHeader(r, off, end);
    size_t body = off + h.header_size;
    size_t chunk_end = off + h.size;
    switch (h.type) {
      case kChunkStringPool:
        if (have_pool) out.warnings.push_back("additional string pool ignored");
        else out.pool = DecodeStringPool(data.subspan(0, end), off);
        have_pool = true;
        break;
      case kChunkResourceMap:
        for (size_t p = body; p + 4 <= chunk_end; p += 4) out.resource_map.push_back(r.U32(p));
        break;
      case kChunkStartNamespace:
      case kChunkEndNamespace:
        break;
      case kChunkStartElement: {
        if (body + 20 > chunk_end) Malformed("start element truncated");
        XmlElement el;
        el.ns = out.pool.At(r.U32(body));
        el.name = out.pool.At(r.U32(body + 4));
        uint16_t attr_start = r.U16(body + 8);
        uint16_t attr_size = r.U16(body + 10);
        uint16_t attr_count = r.U16(body + 12);
        if (attr_count > 0 && attr_size < 20) Malformed("attribute record too small");
        size_t a0 = body + attr_start;
        if (a0 > chunk_end || static_cast<size_t>(attr_count) * attr_size > chunk_end - a0) {
          Malformed("attributes overrun element chunk");
        }
        for (uint16_t i = 0; i < attr_count; ++i) {
          size_t a = a0 + static_cast<size_t>(i) * attr_size;
          XmlAttribute attr;
          attr.ns = out.pool.At(r.U32(a));
          uint32_t name_idx = r.U32(a + 4);
          attr.name = out.pool.At(name_idx);
          if (name_idx < out.resource_map.size()) attr.resource_id = out.resource_map[name_idx];
          uint32_t raw = r.U32(a + 8);
          attr.type = r.U8(a + 15);
          attr.value = RenderValue(out.pool, raw, attr.type, r.U32(a + 16));
          el.attributes.push_back(std::move(attr));
        }
        stack.push_back(std::move(el));
        break;
      }
      case kChunkEndElement: {
        if (stack.empty()) Malformed("end element without a matching start");
        if (body + 8 <= chunk_end) {
          const std::string& name = out.pool.At(r.U32(body + 4));
          if (name != stack.back().name) {
            out.warnings.push_back("end element </" + name + "> closes <" + stack.back().name + ">");
          }
        }
        XmlElement el = std::move(stack.back());
        stack.pop_back();
        if (!stack.empty()) {
          stack.back().children.push_back(std::move(el));
        } else if (!have_root) {
          out.root = std::move(el);
          have_root = true;
        } else {
          out.warnings.push_back("additional root element <" + el.name + "> ignored");
        }
        break;
      }
      case kChunkCdata:
        if (body + 4 > chunk_end) Malformed("cdata truncated");
        if (!stack.empty()) stack.back().text += out.pool.At(r.U32(body));
        break;
      default:
        out.warnings.push_back(Hex32("skipped unknown chunk type 0x", h.type) + " at offset " +
                               std::to_string(off));
        break;
    }
    off = chunk_end;
  }
  if (!stack.empty()) {
    out.warnings.push_back("document ends with unclosed elements");
    while (stack.size() > 1) {
      XmlElement el = std::move(stack.back());
      stack.pop_back();
      stack.back().children.push_back(std::move(el));
    }
    if (!have_root) {
      out.root = std::move(stack.back());
      have_root = true;
    }
  }
  if (!have_root) Malformed("document has no root element");
  return out;
}

std::string ResolveClassName(const std::string& package, const std::string& name) {
  if (name.empty()) return name;
  if (name.front() == '.') return package + name;
  if (name.find('.') == std::string::npos) return package + "." + name;
  return name;
}

ManifestInfo DecodeManifest(Bytes data) {
  AxmlDocument doc = DecodeAxml(data);
  ManifestInfo m;
  m.warnings = doc.warnings;
  const XmlElement& root = doc.root;
  if (root.name != "manifest") m.warnings.push_back("root element is <" + root.name + ">");
  if (const XmlAttribute* pkg = root.Attr("package")) m.package_name = pkg->value;
  if (m.package_name.empty()) m.warnings.push_back("manifest has no package name");

  auto parse_int = [&](const XmlAttribute* a, std::optional<int>& out, const char* what) {
    if (!a) return;
    int v = 0;
    auto [ptr, ec] = std::from_chars(a->value.data(), a->value.data() + a->value.size(), v);
    if (ec == std::errc() && ptr == a->value.data() + a->value.size()) {
      out = v;
    } else {
      m.warnings.push_back(std::string(what) + " is not an integer: " + a->value);
    }
  };

  std::function<void(const XmlElement&, const XmlElement*)> visit =
      [&](const XmlElement& el, const XmlElement* parent) {
        const XmlAttribute* name = el.Attr("name", kAttrName);
        if (el.name == "uses-permission") {
          if (name && !name->value.empty()) m.permissions.push_back(name->value);
        } else if (el.name == "uses-sdk" && parent == &root) {
          parse_int(el.Attr("minSdkVersion", kAttrMinSdk), m.min_sdk, "minSdkVersion");
          parse_int(el.Attr("targetSdkVersion", kAttrTargetSdk), m.target_sdk, "targetSdkVersion");
        } else if (el.name == "meta-data") {
          const XmlAttribute* value = el.Attr("value", kAttrValue);
          if (!value) value = el.Attr("resource", kAttrResource);
          m.metadata.emplace_back(name ? name->value : "", value ? value->value : "");
        }
        if (parent && parent->name == "application" && name) {
          std::string kind;
          if (el.name == "activity" || el.name == "activity-alias") kind = "activity";
          else if (el.name == "service") kind = "service";
          else if (el.name == "receiver") kind = "receiver";
          else if (el.name == "provider") kind = "provider";
          if (!kind.empty()) {
            m.components.push_back({kind, ResolveClassName(m.package_name, name->value)});
          }
        }
        for (const auto& child : el.children) visit(child, &el);
      };
  visit(root, nullptr);
  std::sort(m.permissions.begin(), m.permissions.end());
  m.permissions.erase(std::unique(m.permissions.begin(), m.permissions.end()), m.permissions.end());
  return m;
}

}  // namespace androscan
