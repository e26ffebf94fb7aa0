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

#include "androscan/secrets.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "androscan/embedded.h"
#include "androscan/error.h"
#include "androscan/text.h"

namespace androscan {

namespace {

// Splits UTF-8 text into characters; bytes that do not start a valid
// sequence are characters of their own.
std::vector<std::string_view> Characters(std::string_view s) {
  std::vector<std::string_view> out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t n = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 1;
    if (i + n > s.size()) n = 1;
    for (size_t k = 1; k < n; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        n = 1;
        break;
      }
    }
    out.push_back(s.substr(i, n));
    i += n;
  }
  return out;
}

bool InEntropyCharset(std::string_view s) {
  for (unsigned char c : s) {
    if (!std::isalnum(c) && c != '_' && c != '-') return false;
  }
  return true;
}

const char* const kSecretKeyWords[] = {"api_key", "apikey", "secret", "token", "client_id"};

bool KeyLooksSecret(std::string_view key) {
  std::string k = ToLower(key);
  for (const char* w : kSecretKeyWords) {
    if (k.find(w) != std::string::npos) return true;
  }
  return false;
}

bool LengthOk(const SecretRule& r, size_t n) {
  return n >= r.min_length && (r.max_length == 0 || n <= r.max_length);
}

// Returns the first length-consistent match of any rule.
bool MatchRules(const SecretRules& rules, const std::string& s, const SecretRule** rule,
                std::string* value) {
  for (const auto& r : rules.rules) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), r.regex); it != std::sregex_iterator();
         ++it) {
      std::string m = it->str();
      if (!m.empty() && LengthOk(r, m.size())) {
        *rule = &r;
        *value = std::move(m);
        return true;
      }
    }
  }
  return false;
}

bool EntropyScreen(const std::string& s, const SecretDetectOptions& o, double* h) {
  if (s.size() < o.entropy_min_length || s.size() > o.entropy_max_length) return false;
  if (!InEntropyCharset(s)) return false;
  *h = ShannonEntropy(s);
  return *h >= o.entropy_threshold;
}

}  // namespace

double ShannonEntropy(std::string_view s) {
  if (s.empty()) throw Error(ErrorCode::kEmptyInput, "entropy of an empty string");
  std::map<std::string_view, size_t> freq;
  auto chars = Characters(s);
  for (auto c : chars) ++freq[c];
  double n = static_cast<double>(chars.size());
  double h = 0;
  for (const auto& [c, count] : freq) {
    double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return h == 0 ? 0.0 : h;  // no negative zero
}

SecretRules SecretRules::Parse(std::string_view text) {
  SecretRules out;
  size_t line_no = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    auto fields = Split(line, '\t');
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::kInvalidArgument,
                  "secret rules line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 3 || fields.size() > 4) fail("expected name<TAB>regex<TAB>confidence");
    SecretRule r;
    r.name = std::string(Trim(fields[0]));
    r.pattern = fields[1];
    if (r.name.empty() || r.pattern.empty()) fail("empty name or regex");
    std::string_view conf = Trim(fields[2]);
    auto [p, ec] = std::from_chars(conf.data(), conf.data() + conf.size(), r.confidence);
    if (ec != std::errc() || p != conf.data() + conf.size() || r.confidence < 0 || r.confidence > 1) {
      fail("confidence must be a number in [0,1]");
    }
    if (fields.size() == 4) {
      std::string_view len = Trim(fields[3]);
      size_t dash = len.find('-');
      auto num = [&](std::string_view v, size_t& out) {
        auto [q, e] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (e != std::errc() || q != v.data() + v.size()) fail("bad length constraint");
      };
      if (dash == std::string_view::npos) {
        num(len, r.min_length);
        r.max_length = r.min_length;
      } else {
        num(len.substr(0, dash), r.min_length);
        num(len.substr(dash + 1), r.max_length);
      }
      if (r.max_length < r.min_length || r.max_length == 0) fail("bad length constraint");
    }
    try {
      r.regex = std::regex(r.pattern, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      fail(std::string("bad regex: ") + e.what());
    }
    out.rules.push_back(std::move(r));
  }
  if (out.rules.empty()) throw Error(ErrorCode::kInvalidArgument, "secret rule set is empty");
  return out;
}

SecretRules SecretRules::Bundled() {
  static const SecretRules kBundled = Parse(EmbeddedFile("secret_rules.tsv").value());
  return kBundled;
}

std::string SecretSource::ToString() const {
  if (kind == Kind::kManifestMetadata) return "manifest-metadata(" + key + ")";
  return "dex-string(" + dex_entry + "#" + std::to_string(index) + ")";
}

std::vector<SecretCandidate> DetectSecrets(
    const std::vector<IndexedString>& dex_strings,
    const std::vector<std::pair<std::string, std::string>>& metadata, const SecretRules& rules,
    const SecretDetectOptions& options) {
  std::vector<SecretCandidate> out;
  for (const auto& s : dex_strings) {
    if (s.value.empty()) continue;
    SecretCandidate c;
    c.source = {SecretSource::Kind::kDexString, s.dex_entry, s.index, ""};
    const SecretRule* rule = nullptr;
    double h = 0;
    if (MatchRules(rules, s.value, &rule, &c.value)) {
      c.detector = rule->name;
      c.confidence = rule->confidence;
    } else if (EntropyScreen(s.value, options, &h)) {
      c.value = s.value;
      c.detector = "entropy";
      c.confidence = options.entropy_confidence;
    } else {
      continue;
    }
    c.entropy_bits_per_char = ShannonEntropy(c.value);
    out.push_back(std::move(c));
  }
  for (const auto& [key, value] : metadata) {
    if (value.empty()) continue;
    SecretCandidate c;
    c.source = {SecretSource::Kind::kManifestMetadata, "", 0, key};
    const SecretRule* rule = nullptr;
    double h = 0;
    if (MatchRules(rules, value, &rule, &c.value)) {
      c.detector = rule->name;
      c.confidence = rule->confidence;
    } else if (KeyLooksSecret(key) && value.front() != '@') {
      c.value = value;
      c.detector = "key-name";
      c.confidence = options.key_name_confidence;
    } else if (EntropyScreen(value, options, &h)) {
      c.value = value;
      c.detector = "entropy";
      c.confidence = options.entropy_confidence;
    } else {
      continue;
    }
    c.entropy_bits_per_char = ShannonEntropy(c.value);
    out.push_back(std::move(c));
  }
  return out;
}

std::string Redact(std::string_view value) {
  auto chars = Characters(value);
  if (chars.size() <= 6) return std::string(chars.size(), '*');
  std::string out;
  for (size_t i = 0; i < 4; ++i) out += chars[i];
  out += "****";
  out += chars[chars.size() - 2];
  out += chars[chars.size() - 1];
  return out;
}

}  // namespace androscan
