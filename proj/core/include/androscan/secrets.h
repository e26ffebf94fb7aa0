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

#ifndef ANDROSCAN_SECRETS_H_
#define ANDROSCAN_SECRETS_H_

#include <cstdint>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace androscan {

// Bits per character over UTF-8 code point frequencies. Throws Error(kEmptyInput).
double ShannonEntropy(std::string_view s);

struct SecretRule {
  std::string name;
  std::string pattern;
  std::regex regex;
  double confidence = 0.9;
  size_t min_length = 0;
  size_t max_length = 0;  // 0 = unbounded
};

struct SecretRules {
  std::vector<SecretRule> rules;

  static SecretRules Bundled();
  // "name<TAB>regex<TAB>confidence[<TAB>min[-max]]" per line, '#' comments.
  // Throws Error(kInvalidArgument) on bad lines or regexes.
  static SecretRules Parse(std::string_view text);
};

struct SecretDetectOptions {
  size_t entropy_min_length = 20;
  size_t entropy_max_length = 128;
  double entropy_threshold = 3.5;
  double entropy_confidence = 0.5;
  double key_name_confidence = 0.7;
};

struct IndexedString {
  std::string dex_entry;  // "classes.dex"
  uint32_t index = 0;
  std::string value;
};

struct SecretSource {
  enum class Kind { kDexString, kManifestMetadata };
  Kind kind = Kind::kDexString;
  std::string dex_entry;
  uint32_t index = 0;
  std::string key;

  // "dex-string(classes.dex#12)" or "manifest-metadata(key)"
  std::string ToString() const;
};

struct SecretCandidate {
  std::string value;  // raw; only Redact(value) may be rendered
  SecretSource source;
  std::string detector;  // rule name, "key-name" or "entropy"
  double entropy_bits_per_char = 0;
  double confidence = 0;
};

// Candidates ordered by source: metadata (file order) after dex strings
// (dex entry order, then index). At most one candidate per source item.
std::vector<SecretCandidate> DetectSecrets(
    const std::vector<IndexedString>& dex_strings,
    const std::vector<std::pair<std::string, std::string>>& metadata, const SecretRules& rules,
    const SecretDetectOptions& options = {});

// First 4 and last 2 characters kept ("AIza****Po"); short values are fully
// masked.
std::string Redact(std::string_view value);

}  // namespace androscan

#endif  // ANDROSCAN_SECRETS_H_
