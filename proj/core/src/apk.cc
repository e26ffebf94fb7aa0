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

#include "androscan/apk.h"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>

#include "androscan/byte_reader.h"
#include "androscan/error.h"

namespace androscan {

namespace {

constexpr uint32_t kEocdSig = 0x06054b50;
constexpr uint32_t kZip64EocdSig = 0x06064b50;
constexpr uint32_t kZip64LocatorSig = 0x07064b50;
constexpr uint32_t kCentralSig = 0x02014b50;
constexpr uint32_t kLocalSig = 0x04034b50;
constexpr size_t kEocdSize = 22;
constexpr size_t kMaxComment = 0xFFFF;
constexpr uint64_t kMaxEntrySize = 1ull << 30;

struct Eocd {
  uint64_t count;
  uint64_t cd_size;
  uint64_t cd_offset;
};

Eocd FindEocd(const ByteReader& r) {
  if (r.size() < kEocdSize) throw Error(ErrorCode::kNotAZip, "file too small for a ZIP");
  size_t lowest = r.size() > kEocdSize + kMaxComment ? r.size() - kEocdSize - kMaxComment : 0;
  for (size_t pos = r.size() - kEocdSize + 1; pos-- > lowest;) {
    if (r.U32(pos) != kEocdSig) continue;
    uint16_t comment_len = r.U16(pos + 20);
    if (pos + kEocdSize + comment_len > r.size()) continue;
    Eocd e{r.U16(pos + 10), r.U32(pos + 12), r.U32(pos + 16)};
    bool needs64 = e.count == 0xFFFF || e.cd_size == 0xFFFFFFFF || e.cd_offset == 0xFFFFFFFF;
    if (needs64 && pos >= 20 && r.U32(pos - 20) == kZip64LocatorSig) {
      uint64_t rec = r.U64(pos - 20 + 8);
      if (rec > r.size() || !r.Contains(static_cast<size_t>(rec), 56) ||
          r.U32(static_cast<size_t>(rec)) != kZip64EocdSig) {
        throw Error(ErrorCode::kNotAZip, "bad zip64 end of central directory");
      }
      e.count = r.U64(static_cast<size_t>(rec) + 32);
      e.cd_size = r.U64(static_cast<size_t>(rec) + 40);
      e.cd_offset = r.U64(static_cast<size_t>(rec) + 48);
    }
    return e;
  }
  throw Error(ErrorCode::kNotAZip, "end of central directory signature not found");
}

// Applies the zip64 extended-information extra field to saturated values.
void ApplyZip64Extra(const ByteReader& r, size_t extra, size_t extra_len, ArchiveEntry& e) {
  size_t end = extra + extra_len;
  size_t p = extra;
  while (p + 4 <= end) {
    uint16_t id = r.U16(p), len = r.U16(p + 2);
    size_t body = p + 4;
    if (body + len > end) break;
    if (id == 0x0001) {
      size_t q = body;
      auto take = [&](uint64_t& field) {
        if (field == 0xFFFFFFFF && q + 8 <= body + len) {
          field = r.U64(q);
          q += 8;
        }
      };
      take(e.uncompressed_size);
      take(e.compressed_size);
      take(e.local_header_offset);
      return;
    }
    p = body + len;
  }
}

uint32_t Crc32(const std::vector<uint8_t>& data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  size_t off = 0;
  while (off < data.size()) {
    uInt n = static_cast<uInt>(std::min<size_t>(data.size() - off, 1u << 30));
    crc = crc32(crc, data.data() + off, n);
    off += n;
  }
  return static_cast<uint32_t>(crc);
}

std::vector<uint8_t> Inflate(Bytes in, uint64_t expected, const std::string& name) {
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
    throw Error(ErrorCode::kCorruptEntry, name + ": inflateInit failed");
  }
  std::vector<uint8_t> out;
  out.reserve(static_cast<size_t>(std::min<uint64_t>(expected, 16u << 20)));
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  uint8_t buf[64 * 1024];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = buf;
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kCorruptEntry, name + ": deflate stream error");
    }
    size_t produced = sizeof(buf) - zs.avail_out;
    if (out.size() + produced > expected) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kCorruptEntry, name + ": inflated data exceeds declared size");
    }
    out.insert(out.end(), buf, buf + produced);
    if (rc == Z_OK && produced == 0 && zs.avail_in == 0) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kCorruptEntry, name + ": truncated deflate stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

}  // namespace

int DexEntryNumber(std::string_view name) {
  constexpr std::string_view kPrefix = "classes", kSuffix = ".dex";
  if (name.size() < kPrefix.size() + kSuffix.size() || !name.starts_with(kPrefix) ||
      !name.ends_with(kSuffix)) {
    return 0;
  }
  std::string_view digits = name.substr(kPrefix.size(), name.size() - kPrefix.size() - kSuffix.size());
  if (digits.empty()) return 1;
  if (digits.front() == '0' || digits.size() > 6) return 0;
  int n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || n < 2) return 0;
  return n;
}

std::vector<const ArchiveEntry*> ApkArchive::dex_entries() const {
  std::vector<const ArchiveEntry*> out;
  for (size_t i : dex_indices_) out.push_back(&entries_[i]);
  return out;
}

const ArchiveEntry* ApkArchive::Find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

ApkArchive OpenApkBytes(std::vector<uint8_t> bytes, std::string source_path) {
  ApkArchive a;
  a.source_path_ = std::move(source_path);
  a.bytes_ = std::make_shared<const std::vector<uint8_t>>(std::move(bytes));
  ByteReader r(*a.bytes_, ErrorCode::kNotAZip);
  Eocd eocd = FindEocd(r);
  if (eocd.cd_offset > r.size() || eocd.cd_size > r.size() - eocd.cd_offset) {
    throw Error(ErrorCode::kNotAZip, "central directory outside the file");
  }
  // Each central record is at least 46 bytes; reject impossible counts early.
  if (eocd.count > eocd.cd_size / 46 + 1) {
    throw Error(ErrorCode::kNotAZip, "entry count inconsistent with central directory size");
  }
  size_t p = static_cast<size_t>(eocd.cd_offset);
  size_t cd_end = p + static_cast<size_t>(eocd.cd_size);
  bool have_manifest = false;
  for (uint64_t i = 0; i < eocd.count; ++i) {
    if (p + 46 > cd_end || r.U32(p) != kCentralSig) {
      throw Error(ErrorCode::kNotAZip, "bad central directory record " + std::to_string(i));
    }
    ArchiveEntry e;
    uint16_t flags = r.U16(p + 8);
    e.method = r.U16(p + 10);
    e.crc32 = r.U32(p + 16);
    e.compressed_size = r.U32(p + 20);
    e.uncompressed_size = r.U32(p + 24);
    uint16_t name_len = r.U16(p + 28), extra_len = r.U16(p + 30), comment_len = r.U16(p + 32);
    e.local_header_offset = r.U32(p + 42);
    size_t rec_end = p + 46 + name_len + extra_len + comment_len;
    if (rec_end > cd_end) throw Error(ErrorCode::kNotAZip, "central directory record overruns");
    e.name = std::string(r.Chars(p + 46, name_len));
    ApplyZip64Extra(r, p + 46 + name_len, extra_len, e);
    p = rec_end;
    if (e.name.empty()) {
      a.warnings_.push_back("skipped central directory entry with an empty name");
      continue;
    }
    if (flags & 0x1) a.warnings_.push_back("entry " + e.name + " is encrypted");
    if (!have_manifest && e.name == "AndroidManifest.xml") {
      a.manifest_index_ = a.entries_.size();
      have_manifest = true;
    }
    if (DexEntryNumber(e.name) > 0) a.dex_indices_.push_back(a.entries_.size());
    a.entries_.push_back(std::move(e));
  }
  if (!have_manifest) throw Error(ErrorCode::kNoManifest, "no AndroidManifest.xml entry");
  std::stable_sort(a.dex_indices_.begin(), a.dex_indices_.end(), [&](size_t x, size_t y) {
    return DexEntryNumber(a.entries_[x].name) < DexEntryNumber(a.entries_[y].name);
  });
  // Keep one entry per dex name (first wins).
  a.dex_indices_.erase(std::unique(a.dex_indices_.begin(), a.dex_indices_.end(),
                                   [&](size_t x, size_t y) {
                                     return a.entries_[x].name == a.entries_[y].name;
                                   }),
                       a.dex_indices_.end());
  if (a.dex_indices_.empty()) a.warnings_.push_back("NoDex: archive contains no classes*.dex");
  return a;
}

ApkArchive OpenApk(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kFileUnreadable, "read error on " + path.string());
  return OpenApkBytes(std::move(bytes), path.string());
}

std::vector<uint8_t> ReadEntry(const ApkArchive& archive, std::string_view name) {
  const ArchiveEntry* e = archive.Find(name);
  if (!e) throw Error(ErrorCode::kEntryNotFound, std::string(name));
  ByteReader r(archive.bytes(), ErrorCode::kCorruptEntry);
  if (e->uncompressed_size > kMaxEntrySize) {
    throw Error(ErrorCode::kCorruptEntry, e->name + ": declared size too large");
  }
  if (e->local_header_offset > r.size() || !r.Contains(static_cast<size_t>(e->local_header_offset), 30)) {
    throw Error(ErrorCode::kCorruptEntry, e->name + ": local header outside the file");
  }
  size_t lh = static_cast<size_t>(e->local_header_offset);
  if (r.U32(lh) != kLocalSig) throw Error(ErrorCode::kCorruptEntry, e->name + ": bad local header");
  size_t data = lh + 30 + r.U16(lh + 26) + r.U16(lh + 28);
  if (e->compressed_size > r.size() || !r.Contains(data, static_cast<size_t>(e->compressed_size))) {
    throw Error(ErrorCode::kCorruptEntry, e->name + ": truncated entry data");
  }
  Bytes payload = r.Slice(data, static_cast<size_t>(e->compressed_size));
  std::vector<uint8_t> out;
  if (e->method == 0) {
    if (e->compressed_size != e->uncompressed_size) {
      throw Error(ErrorCode::kCorruptEntry, e->name + ": stored sizes disagree");
    }
    out.assign(payload.begin(), payload.end());
  } else if (e->method == 8) {
    out = Inflate(payload, e->uncompressed_size, e->name);
  } else {
    throw Error(ErrorCode::kCorruptEntry,
                e->name + ": unsupported compression method " + std::to_string(e->method));
  }
  if (out.size() != e->uncompressed_size) {
    throw Error(ErrorCode::kCorruptEntry, e->name + ": size mismatch");
  }
  if (Crc32(out) != e->crc32) throw Error(ErrorCode::kCorruptEntry, e->name + ": crc32 mismatch");
  return out;
}

}  // namespace androscan
