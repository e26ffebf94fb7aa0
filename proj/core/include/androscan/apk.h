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

#ifndef ANDROSCAN_APK_H_
#define ANDROSCAN_APK_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace androscan {

struct ArchiveEntry {
  std::string name;
  uint64_t compressed_size = 0;
  uint64_t uncompressed_size = 0;
  uint32_t crc32 = 0;
  uint16_t method = 0;  // 0 = STORED, 8 = DEFLATE
  uint64_t local_header_offset = 0;
};

// An opened APK. Immutable after OpenApk; ReadEntry may be called from
// several threads at once.
class ApkArchive {
 public:
  const std::string& source_path() const { return source_path_; }
  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  const ArchiveEntry& manifest_entry() const { return entries_[manifest_index_]; }
  // classes.dex, classes2.dex, ... in numeric order.
  std::vector<const ArchiveEntry*> dex_entries() const;
  const ArchiveEntry* Find(std::string_view name) const;
  // Non-fatal problems noticed while opening (e.g. "NoDex").
  const std::vector<std::string>& warnings() const { return warnings_; }
  // Raw archive bytes (used for the report digest).
  const std::vector<uint8_t>& bytes() const { return *bytes_; }

 private:
  friend ApkArchive OpenApkBytes(std::vector<uint8_t> bytes, std::string source_path);

  std::string source_path_;
  std::shared_ptr<const std::vector<uint8_t>> bytes_;
  std::vector<ArchiveEntry> entries_;
  size_t manifest_index_ = 0;
  std::vector<size_t> dex_indices_;
  std::vector<std::string> warnings_;
};

// Throws Error(kFileUnreadable | kNotAZip | kNoManifest). A missing DEX is a
// warning only.
ApkArchive OpenApk(const std::filesystem::path& path);
ApkArchive OpenApkBytes(std::vector<uint8_t> bytes, std::string source_path = "<memory>");

// Returns the decompressed payload after size and CRC verification.
// Throws Error(kEntryNotFound | kCorruptEntry); never returns partial data.
std::vector<uint8_t> ReadEntry(const ApkArchive& archive, std::string_view name);

// Returns N for "classesN.dex" (1 for "classes.dex"), or 0 when the name is
// not a DEX entry.
int DexEntryNumber(std::string_view name);

}  // namespace androscan

#endif  // ANDROSCAN_APK_H_
