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

#include "androscan/endpoint.h"

#include <algorithm>
#include <map>
#include <tuple>

#include <nlohmann/json.hpp>

#include "androscan/embedded.h"
#include "androscan/error.h"
#include "androscan/text.h"
#include "androscan/url.h"

namespace androscan {

namespace {

using IdentityKey = std::tuple<std::string, std::string, int, std::string>;

IdentityKey KeyOf(const Endpoint& e) { return {e.scheme, e.host, e.port.value_or(0), e.path}; }

void AddParam(Endpoint& e, ParamDescriptor p) {
  for (auto& existing : e.params) {
    if (existing.name == p.name && existing.location == p.location) {
      if (p.encrypted_suspect && !existing.encrypted_suspect) {
        existing.encrypted_suspect = true;
        existing.entropy_bits_per_char = p.entropy_bits_per_char;
      }
      return;
    }
  }
  e.params.push_back(std::move(p));
}

void SortParams(Endpoint& e) {
  std::stable_sort(e.params.begin(), e.params.end(), [](const auto& a, const auto& b) {
    return std::tie(a.location, a.name) < std::tie(b.location, b.name);
  });
}

// "{id}" segments keep their name; printf-style "%s"/"%d" segments become
// positional "argN".
void AddPathParams(Endpoint& e) {
  int positional = 0;
  for (const auto& seg : Split(e.path, '/')) {
    if (seg.size() > 2 && seg.front() == '{' && seg.back() == '}') {
      AddParam(e, {seg.substr(1, seg.size() - 2), ParamLocation::kPath, "1", false, 0});
    } else if (seg == "%s" || seg == "%d") {
      ++positional;
      AddParam(e, {"arg" + std::to_string(positional), ParamLocation::kPath,
                   seg == "%d" ? "1" : "test", false, 0});
    }
  }
}

std::optional<Endpoint> EndpointFromUrl(std::string_view text) {
  auto url = ParseHttpUrl(text);
  if (!url) return std::nullopt;
  Endpoint e;
  e.scheme = url->scheme;
  e.host = url->host;
  e.port = url->port;
  e.path = url->path;
  for (auto& [k, v] : ParseQuery(url->query)) {
    double h = 0;
    bool enc = LooksEncrypted(v, &h);
    AddParam(e, {k, ParamLocation::kQuery, v, enc, enc ? h : 0});
  }
  AddPathParams(e);
  return e;
}

std::optional<std::string> TraceUrl(const ApiCallTrace& t) {
  if (t.url) return t.url;
  for (const auto& a : t.raw_args) {
    if (ParseHttpUrl(a)) return a;
  }
  return std::nullopt;
}

}  // namespace

const char* OriginName(Origin o) {
  switch (o) {
    case Origin::kStatic: return "static";
    case Origin::kDynamic: return "dynamic";
    case Origin::kBoth: return "both";
  }
  return "static";
}

Origin ParseOrigin(std::string_view s) {
  if (s == "static") return Origin::kStatic;
  if (s == "dynamic") return Origin::kDynamic;
  if (s == "both") return Origin::kBoth;
  throw Error(ErrorCode::kInvalidArgument, "unknown origin: " + std::string(s));
}

std::string Endpoint::Key() const {
  std::string out = scheme + "://" + host;
  if (port) out += ":" + std::to_string(*port);
  return out + path;
}

const ParamDescriptor* Endpoint::FindParam(std::string_view name, ParamLocation loc) const {
  for (const auto& p : params) {
    if (p.name == name && p.location == loc) return &p;
  }
  return nullptr;
}

const std::vector<std::string>& CanonicalMethods() {
  static const std::vector<std::string> kMethods = {"GET",   "POST", "PUT",    "DELETE",
                                                     "PATCH", "HEAD", "OPTIONS"};
  return kMethods;
}

void AddMethod(std::vector<std::string>& methods, std::string method) {
  for (auto& c : method) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (method.empty() || std::find(methods.begin(), methods.end(), method) != methods.end()) return;
  methods.push_back(std::move(method));
  const auto& order = CanonicalMethods();
  auto rank = [&](const std::string& m) {
    auto it = std::find(order.begin(), order.end(), m);
    return std::make_pair(static_cast<size_t>(it - order.begin()), m);
  };
  std::sort(methods.begin(), methods.end(),
            [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
}

void MergeEndpoint(Endpoint& a, const Endpoint& b) {
  if (a.origin != b.origin) a.origin = Origin::kBoth;
  a.low_confidence = a.low_confidence && b.low_confidence;
  for (const auto& m : b.methods) AddMethod(a.methods, m);
  for (const auto& p : b.params) AddParam(a, p);
  if (a.body_encoding == BodyEncoding::kNone) a.body_encoding = b.body_encoding;
  SortParams(a);
}

void SortInventory(std::vector<Endpoint>& inventory) {
  std::sort(inventory.begin(), inventory.end(), [](const Endpoint& a, const Endpoint& b) {
    return std::tie(a.host, a.path, a.scheme, a.port) < std::tie(b.host, b.path, b.scheme, b.port);
  });
}

std::vector<Endpoint> BuildInventory(const std::vector<StaticUrl>& static_urls,
                                     const std::vector<ApiCallTrace>& traces) {
  std::map<IdentityKey, Endpoint> merged;
  auto add = [&](Endpoint e) {
    SortParams(e);
    auto [it, inserted] = merged.emplace(KeyOf(e), e);
    if (!inserted) MergeEndpoint(it->second, e);
  };
  for (const auto& s : static_urls) {
    auto e = EndpointFromUrl(s.low_confidence ? "https://" + s.url : s.url);
    if (!e) continue;
    e->origin = Origin::kStatic;
    e->low_confidence = s.low_confidence;
    add(std::move(*e));
  }
  for (const auto& t : traces) {
    auto text = TraceUrl(t);
    if (!text) continue;
    auto e = EndpointFromUrl(*text);
    if (!e) continue;
    e->origin = Origin::kDynamic;
    if (t.method) AddMethod(e->methods, *t.method);
    BodyEncoding enc = BodyEncoding::kNone;
    for (auto& p : ParseBodyParams(t, &enc)) {
      double h = 0;
      bool suspect = LooksEncrypted(p.value, &h);
      AddParam(*e, {p.name, p.location, p.value, suspect, suspect ? h : 0});
    }
    e->body_encoding = enc;
    for (const auto& h : t.headers) {
      if (IsTransportHeader(h.key)) continue;
      double ent = 0;
      bool suspect = LooksEncrypted(h.value, &ent);
      AddParam(*e, {h.key, ParamLocation::kHeader, h.value, suspect, suspect ? ent : 0});
    }
    add(std::move(*e));
  }
  std::vector<Endpoint> out;
  out.reserve(merged.size());
  for (auto& [k, e] : merged) out.push_back(std::move(e));
  SortInventory(out);
  return out;
}

VendorList VendorList::Parse(std::string_view text) {
  VendorList v;
  for (const auto& raw : Split(text, '\n')) {
    std::string_view line = raw;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    Vendor vendor;
    size_t eq = line.find('=');
    vendor.name = std::string(Trim(line.substr(0, eq)));
    if (eq != std::string_view::npos) {
      for (const auto& a : Split(line.substr(eq + 1), ',')) {
        std::string_view alias = Trim(a);
        if (!alias.empty()) vendor.aliases.emplace_back(alias);
      }
    }
    if (StripPunctuation(vendor.name).empty()) {
      throw Error(ErrorCode::kInvalidArgument, "vendor line without a name: " + std::string(line));
    }
    v.vendors.push_back(std::move(vendor));
  }
  if (v.vendors.empty()) throw Error(ErrorCode::kInvalidArgument, "vendor list is empty");
  return v;
}

VendorList VendorList::Bundled() {
  static const VendorList kBundled = Parse(EmbeddedFile("vendors.txt").value());
  return kBundled;
}

Classification ClassifyHost(std::string_view host, const VendorList& vendors) {
  std::string flat = StripPunctuation(host);
  std::vector<std::string> labels;
  for (const auto& l : Split(ToLower(host), '.')) labels.push_back(StripPunctuation(l));
  auto matches = [&](const std::string& term) {
    std::string t = StripPunctuation(term);
    if (t.empty()) return false;
    if (vendors.short_name_max > 0 && t.size() <= vendors.short_name_max) {
      return std::any_of(labels.begin(), labels.end(),
                         [&](const std::string& l) { return l.starts_with(t); });
    }
    return flat.find(t) != std::string::npos;
  };
  for (const auto& v : vendors.vendors) {
    bool hit = matches(v.name);
    for (size_t i = 0; !hit && i < v.aliases.size(); ++i) hit = matches(v.aliases[i]);
    if (hit) return {true, true, v.name};
  }
  return {true, false, ""};
}

Classification Classify(const Endpoint& e, const VendorList& vendors) {
  return ClassifyHost(e.host, vendors);
}

void ClassifyAll(std::vector<Endpoint>& inventory, const VendorList& vendors) {
  for (auto& e : inventory) e.classification = Classify(e, vendors);
}

namespace {

using Json = nlohmann::json;

void AddSchemaProperties(Endpoint& e, const Json& schema) {
  if (!schema.is_object() || !schema.contains("properties") || !schema["properties"].is_object()) {
    return;
  }
  for (const auto& [name, prop] : schema["properties"].items()) {
    std::string example;
    if (prop.is_object() && prop.contains("example")) {
      example = prop["example"].is_string() ? prop["example"].get<std::string>()
                                            : prop["example"].dump();
    }
    AddParam(e, {name, ParamLocation::kBody, example, false, 0});
  }
}

std::vector<Endpoint> FromOpenApi(const Json& doc) {
  std::string base;
  if (doc.contains("swagger")) {
    std::string scheme = "https";
    if (doc.contains("schemes") && doc["schemes"].is_array() && !doc["schemes"].empty()) {
      scheme = doc["schemes"][0].get<std::string>();
    }
    base = scheme + "://" + doc.value("host", "") + doc.value("basePath", "");
  } else if (doc.contains("servers") && doc["servers"].is_array() && !doc["servers"].empty()) {
    base = doc["servers"][0].value("url", "");
  }
  while (!base.empty() && base.back() == '/') base.pop_back();
  std::vector<Endpoint> out;
  if (!doc.contains("paths") || !doc["paths"].is_object()) return out;
  for (const auto& [path, item] : doc["paths"].items()) {
    auto e = EndpointFromUrl(base + path);
    if (!e || !item.is_object()) continue;
    for (const auto& [method, op] : item.items()) {
      std::string m = ToLower(method);
      if (m != "get" && m != "post" && m != "put" && m != "delete" && m != "patch" &&
          m != "head" && m != "options") {
        continue;
      }
      AddMethod(e->methods, m);
      if (!op.is_object()) continue;
      if (op.contains("parameters") && op["parameters"].is_array()) {
        for (const auto& p : op["parameters"]) {
          std::string in = p.value("in", "");
          std::string name = p.value("name", "");
          if (name.empty()) continue;
          if (in == "query" || in == "header" || in == "path") {
            AddParam(*e, {name, ParseParamLocation(in), "", false, 0});
          } else if (in == "formData") {
            AddParam(*e, {name, ParamLocation::kBody, "", false, 0});
            e->body_encoding = BodyEncoding::kForm;
          } else if (in == "body") {
            AddSchemaProperties(*e, p.value("schema", Json::object()));
            e->body_encoding = BodyEncoding::kJson;
          }
        }
      }
      if (op.contains("requestBody") && op["requestBody"].contains("content")) {
        for (const auto& [ctype, media] : op["requestBody"]["content"].items()) {
          AddSchemaProperties(*e, media.value("schema", Json::object()));
          e->body_encoding = ContainsIgnoreCase(ctype, "json") ? BodyEncoding::kJson
                                                               : BodyEncoding::kForm;
        }
      }
    }
    out.push_back(std::move(*e));
  }
  return out;
}

std::vector<Endpoint> FromEndpointList(const Json& list) {
  std::vector<Endpoint> out;
  for (const auto& item : list) {
    if (!item.is_object() || !item.contains("url")) {
      throw Error(ErrorCode::kInvalidArgument, "endpoint entries need a \"url\"");
    }
    auto e = EndpointFromUrl(item["url"].get<std::string>());
    if (!e) {
      throw Error(ErrorCode::kInvalidArgument, "not an http(s) URL: " + item["url"].dump());
    }
    if (item.contains("methods")) {
      for (const auto& m : item["methods"]) AddMethod(e->methods, m.get<std::string>());
    }
    if (item.contains("params")) {
      for (const auto& p : item["params"]) {
        AddParam(*e, {p.at("name").get<std::string>(),
                      ParseParamLocation(p.value("location", "query")), p.value("example", ""),
                      false, 0});
      }
    }
    if (item.contains("body_encoding")) {
      std::string enc = item["body_encoding"].get<std::string>();
      e->body_encoding = enc == "json" ? BodyEncoding::kJson
                         : enc == "form" ? BodyEncoding::kForm
                                         : BodyEncoding::kNone;
    }
    out.push_back(std::move(*e));
  }
  return out;
}

}  // namespace

std::vector<Endpoint> LoadApiDefinition(std::string_view json_text) {
  Json doc = Json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kInvalidArgument, "API definition is not JSON");
  std::vector<Endpoint> out;
  try {
    if (doc.is_array()) {
      out = FromEndpointList(doc);
    } else if (doc.is_object() && doc.contains("endpoints")) {
      out = FromEndpointList(doc["endpoints"]);
    } else if (doc.is_object() && (doc.contains("openapi") || doc.contains("swagger"))) {
      out = FromOpenApi(doc);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unrecognized API definition format");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad API definition: ") + e.what());
  }
  for (auto& e : out) {
    e.origin = Origin::kStatic;
    SortParams(e);
  }
  return out;
}

}  // namespace androscan
