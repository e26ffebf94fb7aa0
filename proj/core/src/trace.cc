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

#include "androscan/trace.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "androscan/error.h"
#include "androscan/secrets.h"
#include "androscan/text.h"
#include "androscan/url.h"

namespace androscan {

namespace {

using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void Bad(const std::string& why) { throw Error(ErrorCode::kInvalidArgument, why); }

std::string Stringify(const OrderedJson& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

void MergeHeader(std::vector<KeyValue>& headers, std::string key, std::string value) {
  for (auto& h : headers) {
    if (EqualsIgnoreCase(h.key, key)) {
      h.value += ", " + value;
      return;
    }
  }
  headers.push_back({std::move(key), std::move(value)});
}

const std::string* FindHeader(const std::vector<KeyValue>& headers, std::string_view name) {
  for (const auto& h : headers) {
    if (EqualsIgnoreCase(h.key, name)) return &h.value;
  }
  return nullptr;
}

}  // namespace

const char* ParamLocationName(ParamLocation loc) {
  switch (loc) {
    case ParamLocation::kQuery: return "query";
    case ParamLocation::kBody: return "body";
    case ParamLocation::kHeader: return "header";
    case ParamLocation::kPath: return "path";
  }
  return "query";
}

ParamLocation ParseParamLocation(std::string_view name) {
  if (name == "query") return ParamLocation::kQuery;
  if (name == "body") return ParamLocation::kBody;
  if (name == "header") return ParamLocation::kHeader;
  if (name == "path") return ParamLocation::kPath;
  Bad("unknown parameter location: " + std::string(name));
}

const char* BodyEncodingName(BodyEncoding e) {
  switch (e) {
    case BodyEncoding::kNone: return "none";
    case BodyEncoding::kForm: return "form";
    case BodyEncoding::kJson: return "json";
    case BodyEncoding::kOpaque: return "opaque";
  }
  return "none";
}

bool IsTransportHeader(std::string_view name) {
  static const char* const kExact[] = {
      "host",       "content-length", "content-type", "connection", "user-agent",
      "transfer-encoding", "cache-control", "pragma", "keep-alive", "te", "upgrade"};
  std::string n = ToLower(name);
  if (n.starts_with("accept")) return true;
  for (const char* e : kExact) {
    if (n == e) return true;
  }
  return false;
}

ApiCallTrace ParseTraceLine(std::string_view line) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(line);
  } catch (const nlohmann::json::exception& e) {
    Bad(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) Bad("record is not a JSON object");
  ApiCallTrace t;
  auto str = [&](const char* key, bool required) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) Bad(std::string("missing \"") + key + "\"");
      return std::nullopt;
    }
    if (!it->is_string()) Bad(std::string("\"") + key + "\" is not a string");
    return it->get<std::string>();
  };
  t.timestamp = *str("ts", true);
  t.api = *str("api", true);
  if (t.timestamp.empty() || t.api.empty()) Bad("empty ts or api");
  t.url = str("url", false);
  t.method = str("method", false);
  if (t.method) {
    for (auto& c : *t.method) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (auto it = j.find("args"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) Bad("\"args\" is not an array");
    for (const auto& a : *it) t.raw_args.push_back(Stringify(a));
  }
  if (auto it = j.find("headers"); it != j.end() && !it->is_null()) {
    if (it->is_object()) {
      for (const auto& [k, v] : it->items()) MergeHeader(t.headers, k, Stringify(v));
    } else if (it->is_array()) {
      for (const auto& pair : *it) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string()) {
          Bad("header entries must be [name, value]");
        }
        MergeHeader(t.headers, pair[0].get<std::string>(), Stringify(pair[1]));
      }
    } else {
      Bad("\"headers\" must be an object or array");
    }
  }
  auto body = str("body", false);
  auto body_b64 = str("body_b64", false);
  if (body && body_b64) Bad("both \"body\" and \"body_b64\" present");
  if (body) t.body = std::move(body);
  if (body_b64) {
    std::string decoded;
    if (!Base64Decode(*body_b64, &decoded)) Bad("\"body_b64\" is not valid base64");
    t.body = std::move(decoded);
    t.body_binary = true;
  }
  if (!t.url && t.raw_args.empty()) Bad("record has neither url nor args");
  if (t.url) {
    if (auto u = ParseHttpUrl(*t.url)) {
      for (auto& [k, v] : ParseQuery(u->query)) t.query_params.push_back({k, v});
    }
  }
  return t;
}

std::string SerializeTrace(const ApiCallTrace& t) {
  OrderedJson j;
  j["ts"] = t.timestamp;
  j["api"] = t.api;
  if (!t.raw_args.empty()) j["args"] = t.raw_args;
  if (t.url) j["url"] = *t.url;
  if (t.method) j["method"] = *t.method;
  if (!t.headers.empty()) {
    OrderedJson h = OrderedJson::object();
    for (const auto& kv : t.headers) h[kv.key] = kv.value;
    j["headers"] = h;
  }
  if (t.body) {
    if (t.body_binary) j["body_b64"] = Base64Encode(*t.body);
    else j["body"] = *t.body;
  }
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

TraceFile ParseTraceText(std::string_view text) {
  TraceFile out;
  size_t line_no = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    try {
      ApiCallTrace t = ParseTraceLine(line);
      t.line = line_no;
      out.traces.push_back(std::move(t));
    } catch (const Error& e) {
      ++out.malformed_count;
      out.diagnostics.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.traces.empty()) {
    throw Error(ErrorCode::kAllLinesMalformed,
                "no valid trace records (" + std::to_string(out.malformed_count) + " malformed)");
  }
  return out;
}

TraceFile ParseTraceFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kFileUnreadable, "read error on " + path.string());
  try {
    return ParseTraceText(ss.str());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAllLinesMalformed) throw;
    throw Error(ErrorCode::kAllLinesMalformed, path.string() + ": no valid trace records");
  }
}

std::vector<TraceParam> ParseBodyParams(const ApiCallTrace& t, BodyEncoding* encoding) {
  std::vector<TraceParam> out;
  BodyEncoding enc = BodyEncoding::kNone;
  if (t.body && !t.body->empty()) {
    enc = BodyEncoding::kOpaque;
    const std::string* ct = FindHeader(t.headers, "Content-Type");
    std::string_view body = Trim(*t.body);
    bool json_type = ct && ContainsIgnoreCase(*ct, "json");
    bool form_type = ct && ContainsIgnoreCase(*ct, "x-www-form-urlencoded");
    if (!t.body_binary && (json_type || (!form_type && body.starts_with("{")))) {
      OrderedJson j = OrderedJson::parse(*t.body, nullptr, false);
      if (!j.is_discarded() && j.is_object()) {
        enc = BodyEncoding::kJson;
        for (const auto& [k, v] : j.items()) {
          if (v.is_object()) {
            for (const auto& [k2, v2] : v.items()) {
              out.push_back({k + "." + k2, ParamLocation::kBody, Stringify(v2)});
            }
          } else {
            out.push_back({k, ParamLocation::kBody, Stringify(v)});
          }
        }
      }
    } else if (!t.body_binary &&
               (form_type || (body.find('=') != std::string_view::npos && !HasWhitespace(body)))) {
      enc = BodyEncoding::kForm;
      for (auto& [k, v] : ParseQuery(*t.body)) out.push_back({k, ParamLocation::kBody, v});
    }
  }
  if (encoding) *encoding = enc;
  return out;
}

std::vector<TraceParam> TraceParams(const ApiCallTrace& t) {
  std::vector<TraceParam> out;
  for (const auto& q : t.query_params) out.push_back({q.key, ParamLocation::kQuery, q.value});
  for (auto& b : ParseBodyParams(t, nullptr)) out.push_back(std::move(b));
  for (const auto& h : t.headers) {
    if (!IsTransportHeader(h.key)) out.push_back({h.key, ParamLocation::kHeader, h.value});
  }
  return out;
}

bool LooksEncrypted(std::string_view value, double* entropy) {
  double h = value.empty() ? 0.0 : ShannonEntropy(value);
  if (entropy) *entropy = h;
  if (value.size() < 16) return false;
  if (!IsPrintableText(value)) return true;
  return h >= 4.0 && !HasWhitespace(value);
}

std::vector<ParamFlag> FlagEncryptedParams(const ApiCallTrace& t) {
  std::vector<ParamFlag> out;
  for (const auto& p : TraceParams(t)) {
    ParamFlag f;
    f.param_path = std::string(ParamLocationName(p.location)) + ":" + p.name;
    f.encrypted_suspect = LooksEncrypted(p.value, &f.entropy_bits_per_char);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace androscan
