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

#ifndef ANDROSCAN_URL_H_
#define ANDROSCAN_URL_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace androscan {

struct Url {
  std::string scheme;  // lowercase
  std::string host;    // lowercase
  std::optional<int> port;
  std::string path;    // always begins with '/'
  std::string query;   // raw, without '?'

  // Port to connect to: the explicit one or the scheme default.
  int EffectivePort() const;
  // scheme://host[:port]path[?query]
  std::string ToString() const;
  // scheme://host[:port]
  std::string Origin() const;
};

// Parses absolute http(s) URLs. Default ports are dropped, host lowercased,
// path kept verbatim (templates such as "{id}" are not encoded), fragment
// discarded. Returns nullopt for anything else.
std::optional<Url> ParseHttpUrl(std::string_view text);

// Splits a raw query string into decoded key/value pairs, in order.
std::vector<std::pair<std::string, std::string>> ParseQuery(std::string_view query);

// Builds a raw query string from pairs, percent-encoding both sides.
std::string BuildQuery(const std::vector<std::pair<std::string, std::string>>& pairs);

// True for a syntactically valid DNS-ish host name (labels of
// [a-z0-9-_], at least one dot, or an IPv4 literal, or "localhost").
bool IsPlausibleHost(std::string_view host);

}  // namespace androscan

#endif  // ANDROSCAN_URL_H_
