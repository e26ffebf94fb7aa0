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

#ifndef ANDROSCAN_ENDPOINT_H_
#define ANDROSCAN_ENDPOINT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "androscan/trace.h"

namespace androscan {

enum class Origin { kStatic, kDynamic, kBoth };
const char* OriginName(Origin o);
Origin ParseOrigin(std::string_view s);

struct ParamDescriptor {
  std::string name;
  ParamLocation location = ParamLocation::kQuery;
  std::string example;
  bool encrypted_suspect = false;
  double entropy_bits_per_char = 0;

  bool operator==(const ParamDescriptor&) const = default;
};

struct Classification {
  bool classified = false;
  bool external = false;
  std::string vendor;

  bool operator==(const Classification&) const = default;
};

struct Endpoint {
  std::string scheme;
  std::string host;
  std::optional<int> port;
  std::string path;
  std::vector<std::string> methods;  // canonical order
  std::vector<ParamDescriptor> params;
  Origin origin = Origin::kStatic;
  Classification classification;
  BodyEncoding body_encoding = BodyEncoding::kNone;
  bool low_confidence = false;

  // scheme://host[:port]path
  std::string Key() const;
  const ParamDescriptor* FindParam(std::string_view name, ParamLocation loc) const;

  bool operator==(const Endpoint&) const = default;
};

// GET POST PUT DELETE PATCH HEAD OPTIONS
const std::vector<std::string>& CanonicalMethods();
void AddMethod(std::vector<std::string>& methods, std::string method);

struct StaticUrl {
  std::string url;
  bool low_confidence = false;
};

// Normalizes, merges by identity key (scheme, host, port, path) and orders
// by (host, path). Schemeless static URLs are taken as https.
std::vector<Endpoint> BuildInventory(const std::vector<StaticUrl>& static_urls,
                                     const std::vector<ApiCallTrace>& traces);

// Merges b into a (same identity key): origin union, params union with the
// first example kept.
void MergeEndpoint(Endpoint& a, const Endpoint& b);
void SortInventory(std::vector<Endpoint>& inventory);

struct Vendor {
  std::string name;
  std::vector<std::string> aliases;
};

struct VendorList {
  std::vector<Vendor> vendors;  // match order
  // Names of at most this many normalized characters must match at a host
  // label boundary; 0 disables the rule.
  size_t short_name_max = 5;

  static VendorList Bundled();
  // "Name" or "Name=alias1,alias2" per line, '#' comments.
  static VendorList Parse(std::string_view text);
};

Classification ClassifyHost(std::string_view host, const VendorList& vendors);
Classification Classify(const Endpoint& e, const VendorList& vendors);
void ClassifyAll(std::vector<Endpoint>& inventory, const VendorList& vendors);

// Loads an API definition (endpoint list, OpenAPI 3 or Swagger 2 JSON) as
// static endpoints. Throws Error(kInvalidArgument).
std::vector<Endpoint> LoadApiDefinition(std::string_view json_text);

}  // namespace androscan

#endif  // ANDROSCAN_ENDPOINT_H_
