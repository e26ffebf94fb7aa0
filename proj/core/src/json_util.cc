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

#include "androscan/json_util.h"

#include <fstream>
#include <sstream>

#include "androscan/error.h"

namespace androscan {

namespace {

template <typename T>
Json Opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> GetOpt(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

std::string DumpCanonical(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json ReadJsonFile(const std::filesystem::path& path) {
  Json j = Json::parse(ReadTextFile(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kInvalidArgument, path.string() + " is not valid JSON");
  return j;
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed on " + path.string());
}

void to_json(Json& j, const ParamDescriptor& p) {
  j = Json{{"name", p.name},
           {"location", ParamLocationName(p.location)},
           {"example", p.example},
           {"encrypted_suspect", p.encrypted_suspect},
           {"entropy_bits_per_char", p.entropy_bits_per_char}};
}

void from_json(const Json& j, ParamDescriptor& p) {
  p.name = j.at("name").get<std::string>();
  p.location = ParseParamLocation(j.at("location").get<std::string>());
  p.example = j.value("example", "");
  p.encrypted_suspect = j.value("encrypted_suspect", false);
  p.entropy_bits_per_char = j.value("entropy_bits_per_char", 0.0);
}

void to_json(Json& j, const Endpoint& e) {
  j = Json{{"key", e.Key()},
           {"scheme", e.scheme},
           {"host", e.host},
           {"port", Opt(e.port)},
           {"path", e.path},
           {"methods", e.methods},
           {"params", e.params},
           {"origin", OriginName(e.origin)},
           {"classification",
            {{"classified", e.classification.classified},
             {"external", e.classification.external},
             {"vendor", e.classification.vendor}}},
           {"body_encoding", BodyEncodingName(e.body_encoding)},
           {"low_confidence", e.low_confidence}};
}

void from_json(const Json& j, Endpoint& e) {
  e.scheme = j.at("scheme").get<std::string>();
  e.host = j.at("host").get<std::string>();
  e.port = GetOpt<int>(j, "port");
  e.path = j.at("path").get<std::string>();
  e.methods = j.value("methods", std::vector<std::string>{});
  e.params = j.value("params", std::vector<ParamDescriptor>{});
  e.origin = ParseOrigin(j.value("origin", "static"));
  if (auto it = j.find("classification"); it != j.end()) {
    e.classification.classified = it->value("classified", false);
    e.classification.external = it->value("external", false);
    e.classification.vendor = it->value("vendor", "");
  }
  std::string enc = j.value("body_encoding", "none");
  e.body_encoding = BodyEncoding::kNone;
  for (auto b : {BodyEncoding::kNone, BodyEncoding::kForm, BodyEncoding::kJson,
                 BodyEncoding::kOpaque}) {
    if (enc == BodyEncodingName(b)) e.body_encoding = b;
  }
  e.low_confidence = j.value("low_confidence", false);
}

void to_json(Json& j, const Finding& f) {
  j = Json{{"check_id", f.check_id},
           {"owasp_category", f.owasp_category},
           {"owasp_api_rank", Opt(f.owasp_api_rank)},
           {"endpoint", f.endpoint},
           {"severity", SeverityName(f.severity)},
           {"confidence", f.confidence},
           {"evidence", f.evidence},
           {"remediation", f.remediation},
           {"probe_index", f.probe_index},
           {"parameter", f.parameter},
           {"method", f.method}};
}

void from_json(const Json& j, Finding& f) {
  f.check_id = j.at("check_id").get<std::string>();
  f.owasp_category = j.value("owasp_category", "");
  f.owasp_api_rank = GetOpt<int>(j, "owasp_api_rank");
  f.endpoint = j.at("endpoint").get<std::string>();
  f.severity = ParseSeverity(j.at("severity").get<std::string>());
  f.confidence = j.at("confidence").get<double>();
  f.evidence = j.value("evidence", "");
  f.remediation = j.value("remediation", "");
  f.probe_index = j.value("probe_index", 0);
  f.parameter = j.value("parameter", "");
  f.method = j.value("method", "");
}

void to_json(Json& j, const ScanNote& n) { j = Json{{"endpoint", n.endpoint}, {"message", n.message}}; }

void from_json(const Json& j, ScanNote& n) {
  n.endpoint = j.value("endpoint", "");
  n.message = j.at("message").get<std::string>();
}

void to_json(Json& j, const ManifestInfo& m) {
  Json components = Json::array(), metadata = Json::array();
  for (const auto& c : m.components) components.push_back({{"kind", c.kind}, {"class_name", c.class_name}});
  for (const auto& [k, v] : m.metadata) metadata.push_back({{"key", k}, {"value", v}});
  j = Json{{"package_name", m.package_name},
           {"permissions", m.permissions},
           {"components", components},
           {"metadata", metadata},
           {"min_sdk", Opt(m.min_sdk)},
           {"target_sdk", Opt(m.target_sdk)},
           {"warnings", m.warnings}};
}

void from_json(const Json& j, ManifestInfo& m) {
  m.package_name = j.value("package_name", "");
  m.permissions = j.value("permissions", std::vector<std::string>{});
  m.components.clear();
  for (const auto& c : j.value("components", Json::array())) {
    m.components.push_back({c.at("kind").get<std::string>(), c.at("class_name").get<std::string>()});
  }
  m.metadata.clear();
  for (const auto& kv : j.value("metadata", Json::array())) {
    m.metadata.emplace_back(kv.at("key").get<std::string>(), kv.at("value").get<std::string>());
  }
  m.min_sdk = GetOpt<int>(j, "min_sdk");
  m.target_sdk = GetOpt<int>(j, "target_sdk");
  m.warnings = j.value("warnings", std::vector<std::string>{});
}

void to_json(Json& j, const ReportSecret& s) {
  j = Json{{"value", s.value},
           {"source", s.source},
           {"detector", s.detector},
           {"entropy_bits_per_char", s.entropy_bits_per_char},
           {"confidence", s.confidence}};
}

void from_json(const Json& j, ReportSecret& s) {
  s.value = j.at("value").get<std::string>();
  s.source = j.at("source").get<std::string>();
  s.detector = j.at("detector").get<std::string>();
  s.entropy_bits_per_char = j.value("entropy_bits_per_char", 0.0);
  s.confidence = j.value("confidence", 0.0);
}

void to_json(Json& j, const EncryptedParam& p) {
  j = Json{{"endpoint", p.endpoint},
           {"param_path", p.param_path},
           {"entropy_bits_per_char", p.entropy_bits_per_char}};
}

void from_json(const Json& j, EncryptedParam& p) {
  p.endpoint = j.at("endpoint").get<std::string>();
  p.param_path = j.at("param_path").get<std::string>();
  p.entropy_bits_per_char = j.value("entropy_bits_per_char", 0.0);
}

void to_json(Json& j, const EntryPointUse& u) {
  j = Json{{"entry_point", u.entry_point},
           {"class_descriptor", u.class_descriptor},
           {"method_name", u.method_name},
           {"referencing_class", u.referencing_class}};
}

void from_json(const Json& j, EntryPointUse& u) {
  u.entry_point = j.at("entry_point").get<std::string>();
  u.class_descriptor = j.value("class_descriptor", "");
  u.method_name = j.value("method_name", "");
  u.referencing_class = j.value("referencing_class", "");
}

void to_json(Json& j, const Report& r) {
  j = Json{{"tool_version", r.tool_version},
           {"app",
            {{"package_name", r.app.package_name},
             {"apk_digest", r.app.apk_digest},
             {"min_sdk", Opt(r.app.min_sdk)},
             {"target_sdk", Opt(r.app.target_sdk)}}},
           {"generated_at", r.generated_at},
           {"permissions", r.permissions},
           {"endpoints", r.endpoints},
           {"secrets", r.secrets},
           {"encrypted_params", r.encrypted_params},
           {"entry_points", r.entry_points},
           {"findings", r.findings},
           {"notes", r.notes},
           {"stats",
            {{"total_apis", r.stats.total_apis},
             {"external_apis", r.stats.external_apis},
             {"internal_apis", r.stats.internal_apis},
             {"vulnerabilities", r.stats.vulnerabilities}}},
           {"owner_contact", Opt(r.owner_contact)}};
}

void from_json(const Json& j, Report& r) {
  r.tool_version = j.at("tool_version").get<std::string>();
  const Json& app = j.at("app");
  r.app.package_name = app.value("package_name", "");
  r.app.apk_digest = app.value("apk_digest", "");
  r.app.min_sdk = GetOpt<int>(app, "min_sdk");
  r.app.target_sdk = GetOpt<int>(app, "target_sdk");
  r.generated_at = j.value("generated_at", "");
  r.permissions = j.at("permissions").get<std::vector<std::string>>();
  r.endpoints = j.at("endpoints").get<std::vector<Endpoint>>();
  r.secrets = j.at("secrets").get<std::vector<ReportSecret>>();
  r.encrypted_params = j.at("encrypted_params").get<std::vector<EncryptedParam>>();
  r.entry_points = j.at("entry_points").get<std::vector<EntryPointUse>>();
  r.findings = j.at("findings").get<std::vector<Finding>>();
  r.notes = j.value("notes", std::vector<ScanNote>{});
  const Json& s = j.at("stats");
  r.stats.total_apis = s.at("total_apis").get<int>();
  r.stats.external_apis = s.at("external_apis").get<int>();
  r.stats.internal_apis = s.at("internal_apis").get<int>();
  r.stats.vulnerabilities = s.at("vulnerabilities").get<int>();
  r.owner_contact = GetOpt<std::string>(j, "owner_contact");
}

}  // namespace androscan
