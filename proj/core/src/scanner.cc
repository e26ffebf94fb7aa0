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

#include "androscan/scanner.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstring>
#include <map>
#include <regex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "androscan/error.h"
#include "androscan/text.h"
#include "androscan/version.h"

namespace androscan {

namespace {

constexpr const char* kMisconfig = "API7:2019 Security Misconfiguration";

const std::vector<CheckInfo> kChecks = {
    {"HDR_XSS_PROTECTION_MISSING", Severity::kLow, 7, kMisconfig,
     "Send \"X-XSS-Protection: 1; mode=block\" on every response."},
    {"HDR_CONTENT_TYPE_OPTIONS_MISSING", Severity::kLow, 7, kMisconfig,
     "Send \"X-Content-Type-Options: nosniff\" on every response."},
    {"HDR_FRAME_OPTIONS_MISSING", Severity::kLow, 7, kMisconfig,
     "Send \"X-Frame-Options: DENY\" (or SAMEORIGIN) on every response."},
    {"HDR_HSTS_MISSING", Severity::kLow, 7, kMisconfig,
     "Send \"Strict-Transport-Security: max-age=31536000; includeSubDomains\" over HTTPS."},
    {"HDR_CSP_MISSING", Severity::kLow, 7, kMisconfig,
     "Send a restrictive Content-Security-Policy, e.g. \"default-src 'none'\" for API responses."},
    {"METHOD_UNEXPECTED_ALLOWED", Severity::kMedium, 5,
     "API5:2019 Broken Function Level Authorization",
     "Reject HTTP methods the endpoint does not serve with 405 Method Not Allowed."},
    {"FUZZ_SERVER_ERROR", Severity::kMedium, 7, kMisconfig,
     "Validate parameter length, type and format before use; return 4xx for bad input."},
    {"FUZZ_REFLECTION", Severity::kMedium, 8, "API8:2019 Injection",
     "Encode output for its context and never echo raw input into responses."},
    {"EXCESSIVE_DATA_EXPOSURE", Severity::kHigh, 3, "API3:2019 Excessive Data Exposure",
     "Return only the fields the client needs; filter sensitive fields on the server."},
};

struct HeaderCheck {
  const char* header;
  const char* check_id;
  bool https_only;
};

const HeaderCheck kHeaderChecks[] = {
    {"X-XSS-Protection", "HDR_XSS_PROTECTION_MISSING", false},
    {"X-Content-Type-Options", "HDR_CONTENT_TYPE_OPTIONS_MISSING", false},
    {"X-Frame-Options", "HDR_FRAME_OPTIONS_MISSING", false},
    {"Strict-Transport-Security", "HDR_HSTS_MISSING", true},
    {"Content-Security-Policy", "HDR_CSP_MISSING", false},
};

Finding MakeFinding(const std::string& check_id, const Endpoint& e) {
  const CheckInfo& info = LookupCheck(check_id);
  Finding f;
  f.check_id = info.check_id;
  f.owasp_category = info.owasp_category;
  f.owasp_api_rank = info.owasp_api_rank;
  f.endpoint = e.Key();
  f.severity = info.severity;
  f.remediation = info.remediation;
  f.confidence = 1.0;
  return f;
}

bool Is2xx(const HttpResponse& r) {
  return !r.transport_error && r.status >= 200 && r.status < 300;
}

bool Is5xx(const HttpResponse& r) {
  return !r.transport_error && r.status >= 500 && r.status < 600;
}

uint64_t Fnv1a(uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h ^ 0xff;  // field separator
}

std::string ParamPath(const ParamDescriptor& p) {
  return std::string(ParamLocationName(p.location)) + ":" + p.name;
}

}  // namespace

const char* SeverityName(Severity s) {
  switch (s) {
    case Severity::kHigh:
      return "High";
    case Severity::kMedium:
      return "Medium";
    case Severity::kLow:
      return "Low";
  }
  return "Low";
}

Severity ParseSeverity(std::string_view s) {
  std::string l = ToLower(s);
  if (l == "high") return Severity::kHigh;
  if (l == "medium") return Severity::kMedium;
  if (l == "low") return Severity::kLow;
  throw Error(ErrorCode::kInvalidArgument, "unknown severity '" + std::string(s) + "'");
}

void ScanConfig::Validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be > 0");
  };
  need(timeout_ms > 0, "timeout_ms");
  need(max_concurrency > 0, "max_concurrency");
  need(requests_per_second_cap > 0 && std::isfinite(requests_per_second_cap),
       "requests_per_second_cap");
  need(fuzz_iterations_per_param > 0, "fuzz_iterations_per_param");
  need(max_redirects > 0, "max_redirects");
}

const std::vector<CheckInfo>& AllChecks() { return kChecks; }

const CheckInfo& LookupCheck(std::string_view check_id) {
  for (const auto& c : kChecks) {
    if (check_id == c.check_id) return c;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown check id " + std::string(check_id));
}

const char* PayloadClassName(PayloadClass c) {
  switch (c) {
    case PayloadClass::kOversized:
      return "oversized";
    case PayloadClass::kFormatSpecifier:
      return "format-specifier";
    case PayloadClass::kMetacharacters:
      return "metacharacters";
    case PayloadClass::kExtremeInteger:
      return "extreme-integer";
    case PayloadClass::kEmpty:
      return "empty";
    case PayloadClass::kNullLiteral:
      return "null-literal";
  }
  return "empty";
}

std::vector<std::string> ExpectedMethods(const Endpoint& e) {
  std::vector<std::string> m = e.methods;
  if (m.empty()) m.push_back("GET");
  if (std::find(m.begin(), m.end(), "GET") != m.end()) AddMethod(m, "HEAD");
  return m;
}

std::string BaselineMethod(const Endpoint& e) {
  if (e.methods.empty()) return "GET";
  if (std::find(e.methods.begin(), e.methods.end(), "GET") != e.methods.end()) return "GET";
  return e.methods.front();
}

std::vector<std::pair<PayloadClass, std::string>> FuzzSchedule(uint64_t seed,
                                                               const std::string& endpoint_key,
                                                               const ParamDescriptor& param,
                                                               int iterations) {
  static const std::vector<std::string> kFormat = {"%s%s%s%s", "%x%x%x%x", "%n%n%n%n",
                                                    "%d%d%d%d", "${7*7}%s"};
  static const std::vector<std::string> kMeta = {"'\"><script>alert(1)</script>",
                                                  "\"><img src=x onerror=alert(1)>",
                                                  "';--<>\"", "<svg/onload=alert(1)>'\""};
  static const std::vector<std::string> kInts = {"-1", "-2147483649", "9223372036854775808",
                                                  "99999999999999999999"};
  uint64_t h = 14695981039346656037ull;
  h = Fnv1a(h, std::to_string(seed));
  h = Fnv1a(h, endpoint_key);
  h = Fnv1a(h, param.name);
  h = Fnv1a(h, ParamLocationName(param.location));
  std::mt19937_64 rng(h);

  std::vector<int> order(kPayloadClassCount);
  for (int i = 0; i < kPayloadClassCount; ++i) order[i] = i;
  for (int i = kPayloadClassCount - 1; i > 0; --i) {
    std::swap(order[i], order[rng() % static_cast<uint64_t>(i + 1)]);
  }

  std::vector<std::pair<PayloadClass, std::string>> out;
  for (int i = 0; i < iterations; ++i) {
    int cls = i < kPayloadClassCount ? order[i] : static_cast<int>(rng() % kPayloadClassCount);
    auto pc = static_cast<PayloadClass>(cls);
    std::string value;
    switch (pc) {
      case PayloadClass::kOversized:
        value.assign(4096, 'A');
        break;
      case PayloadClass::kFormatSpecifier:
        value = kFormat[rng() % kFormat.size()];
        break;
      case PayloadClass::kMetacharacters:
        value = kMeta[rng() % kMeta.size()];
        break;
      case PayloadClass::kExtremeInteger:
        value = kInts[rng() % kInts.size()];
        break;
      case PayloadClass::kEmpty:
        break;
      case PayloadClass::kNullLiteral:
        value = "null";
        break;
    }
    out.emplace_back(pc, std::move(value));
  }
  return out;
}

HttpRequest BuildRequest(const Endpoint& e, const std::string& method, bool with_params,
                         const ParamDescriptor* override_param, const std::string& override_value,
                         bool null_literal) {
  auto is_override = [&](const ParamDescriptor& p) {
    return override_param && p.name == override_param->name &&
           p.location == override_param->location;
  };
  auto value_of = [&](const ParamDescriptor& p) -> const std::string& {
    return is_override(p) ? override_value : p.example;
  };

  HttpRequest req;
  req.method = method;
  req.url.scheme = e.scheme;
  req.url.host = e.host;
  req.url.port = e.port;

  // Path templates are always filled; a request with a literal "{id}" would
  // only probe the router.
  std::vector<std::string> segments = Split(e.path, '/');
  int positional = 0;
  for (auto& seg : segments) {
    std::string name;
    if (seg.size() > 2 && seg.front() == '{' && seg.back() == '}') {
      name = seg.substr(1, seg.size() - 2);
    } else if (seg == "%s" || seg == "%d") {
      name = "arg" + std::to_string(++positional);
    } else {
      continue;
    }
    const ParamDescriptor* p = e.FindParam(name, ParamLocation::kPath);
    seg = PercentEncode(p ? value_of(*p) : std::string("1"));
  }
  for (size_t i = 0; i < segments.size(); ++i) {
    if (i) req.url.path += '/';
    req.url.path += segments[i];
  }
  if (req.url.path.empty()) req.url.path = "/";

  req.headers.push_back({"User-Agent", std::string("androscan/") + Version()});
  req.headers.push_back({"Accept", "*/*"});
  if (!with_params) return req;

  std::vector<std::pair<std::string, std::string>> query, form;
  nlohmann::ordered_json body = nlohmann::ordered_json::object();
  bool any_body = false;
  for (const auto& p : e.params) {
    const std::string& v = value_of(p);
    switch (p.location) {
      case ParamLocation::kQuery:
        query.emplace_back(p.name, v);
        break;
      case ParamLocation::kHeader:
        req.headers.push_back({p.name, v});
        break;
      case ParamLocation::kPath:
        break;
      case ParamLocation::kBody: {
        any_body = true;
        if (e.body_encoding == BodyEncoding::kJson) {
          nlohmann::ordered_json jv =
              (null_literal && is_override(p)) ? nlohmann::ordered_json(nullptr)
                                               : nlohmann::ordered_json(v);
          size_t dot = p.name.find('.');
          if (dot != std::string::npos && dot > 0 && dot + 1 < p.name.size()) {
            auto& parent = body[p.name.substr(0, dot)];
            if (!parent.is_object()) parent = nlohmann::ordered_json::object();
            parent[p.name.substr(dot + 1)] = jv;
          } else {
            body[p.name] = jv;
          }
        } else {
          form.emplace_back(p.name, v);
        }
        break;
      }
    }
  }
  req.url.query = BuildQuery(query);
  if (any_body) {
    if (e.body_encoding == BodyEncoding::kJson) {
      req.body = body.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
      req.headers.push_back({"Content-Type", "application/json"});
    } else {
      req.body = BuildQuery(form);
      req.headers.push_back({"Content-Type", "application/x-www-form-urlencoded"});
    }
  }
  return req;
}

std::vector<Probe> PlanProbes(const Endpoint& e, const ScanConfig& cfg) {
  std::vector<Probe> plan;
  auto add = [&](ProbeKind kind, std::string method, HttpRequest req) {
    Probe p;
    p.index = static_cast<int>(plan.size());
    p.kind = kind;
    p.method = std::move(method);
    p.request = std::move(req);
    plan.push_back(std::move(p));
    return &plan.back();
  };
  std::string base = BaselineMethod(e);
  add(ProbeKind::kBaseline, base, BuildRequest(e, base, true));
  for (const auto& m : CanonicalMethods()) add(ProbeKind::kMethod, m, BuildRequest(e, m, false));
  for (const auto& param : e.params) {
    if (param.encrypted_suspect) continue;
    auto schedule = FuzzSchedule(cfg.seed, e.Key(), param, cfg.fuzz_iterations_per_param);
    for (auto& [cls, value] : schedule) {
      bool null_literal = cls == PayloadClass::kNullLiteral;
      Probe* p = add(ProbeKind::kFuzz, base,
                     BuildRequest(e, base, true, &param, value, null_literal));
      p->param = ParamPath(param);
      p->payload_class = cls;
      p->payload = std::move(value);
    }
  }
  return plan;
}

std::vector<Finding> CheckSecurityHeaders(const Endpoint& e, const HttpResponse& baseline,
                                          int probe_index) {
  std::vector<Finding> out;
  if (baseline.transport_error) return out;
  for (const auto& hc : kHeaderChecks) {
    if (hc.https_only && e.scheme != "https") continue;
    if (baseline.Header(hc.header)) continue;
    Finding f = MakeFinding(hc.check_id, e);
    f.method = BaselineMethod(e);
    f.probe_index = probe_index;
    f.confidence = AggregateConfidence(1, 1);
    f.evidence = f.method + " " + e.Key() + " -> " + std::to_string(baseline.status) +
                 "; response has no " + hc.header + " header";
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> AnalyzeMethods(const Endpoint& e, const std::vector<Probe>& probes,
                                    const std::vector<HttpResponse>& results) {
  std::vector<Finding> out;
  std::vector<std::string> expected = ExpectedMethods(e);
  std::string expected_text;
  for (const auto& m : expected) expected_text += (expected_text.empty() ? "" : ",") + m;
  for (size_t i = 0; i < probes.size() && i < results.size(); ++i) {
    const Probe& p = probes[i];
    if (p.kind != ProbeKind::kMethod || !Is2xx(results[i])) continue;
    if (std::find(expected.begin(), expected.end(), p.method) != expected.end()) continue;
    Finding f = MakeFinding("METHOD_UNEXPECTED_ALLOWED", e);
    f.method = p.method;
    f.probe_index = p.index;
    f.evidence = p.method + " " + e.Key() + " -> " + std::to_string(results[i].status) +
                 "; expected methods: " + expected_text;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> AnalyzeFuzz(const Endpoint& e, const std::vector<Probe>& probes,
                                 const std::vector<HttpResponse>& results, int trials) {
  struct Tally {
    int count = 0;
    int first_index = -1;
    std::set<std::string> classes;
    std::set<int> statuses;
  };
  // A baseline that already fails says nothing about the fuzzed input.
  bool baseline_5xx = false;
  for (size_t i = 0; i < probes.size() && i < results.size(); ++i) {
    if (probes[i].kind == ProbeKind::kBaseline) baseline_5xx = Is5xx(results[i]);
  }
  std::map<std::string, Tally> server_errors, reflections;
  std::map<std::string, std::string> method_of;
  for (size_t i = 0; i < probes.size() && i < results.size(); ++i) {
    const Probe& p = probes[i];
    const HttpResponse& r = results[i];
    if (p.kind != ProbeKind::kFuzz || r.transport_error) continue;
    method_of[p.param] = p.method;
    auto tally = [&](Tally& t) {
      if (t.first_index < 0) t.first_index = p.index;
      ++t.count;
      t.classes.insert(PayloadClassName(p.payload_class));
      t.statuses.insert(r.status);
    };
    if (Is5xx(r) && !baseline_5xx) tally(server_errors[p.param]);
    bool has_meta = p.payload.find_first_of("<>\"'") != std::string::npos;
    if (has_meta && r.body.find(p.payload) != std::string::npos) tally(reflections[p.param]);
  }
  std::vector<Finding> out;
  auto emit = [&](const std::string& check_id, const std::map<std::string, Tally>& tallies,
                  const char* what) {
    for (const auto& [param, t] : tallies) {
      double c = AggregateConfidence(t.count, trials);
      if (c <= 0) continue;
      Finding f = MakeFinding(check_id, e);
      f.parameter = param;
      f.method = method_of[param];
      f.probe_index = t.first_index;
      f.confidence = c;
      std::string classes, statuses;
      for (const auto& s : t.classes) classes += (classes.empty() ? "" : ",") + s;
      for (int s : t.statuses) statuses += (statuses.empty() ? "" : ",") + std::to_string(s);
      f.evidence = f.method + " " + e.Key() + " with " + param + " set to " + classes +
                   " payloads -> " + statuses + "; " + what + " in " + std::to_string(t.count) +
                   "/" + std::to_string(trials) + " iterations";
      out.push_back(std::move(f));
    }
  };
  emit("FUZZ_SERVER_ERROR", server_errors, "server error");
  emit("FUZZ_REFLECTION", reflections, "payload echoed unencoded");
  return out;
}

namespace {

struct SensitivityHit {
  std::string path;
  std::string cls;
  bool operator<(const SensitivityHit& o) const {
    return std::tie(path, cls) < std::tie(o.path, o.cls);
  }
};

bool PlausibleEpoch(const nlohmann::json& v) {
  if (!v.is_number_integer()) return false;
  long double n =
      v.is_number_unsigned() ? v.get<uint64_t>() : static_cast<long double>(v.get<int64_t>());
  // Seconds or milliseconds between 2001-09 and 2100-01.
  return (n >= 1e9L && n < 4.1e9L) || (n >= 1e12L && n < 4.1e12L);
}

bool IsIsoTimestamp(const std::string& s) {
  static const std::regex re(R"(^\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?$)");
  return s.size() <= 40 && std::regex_match(s, re);
}

bool IsEmail(const std::string& s) {
  static const std::regex re(R"(^[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}$)");
  return s.size() <= 254 && std::regex_match(s, re);
}

bool IsPhone(const std::string& key, const std::string& s) {
  if (s.size() > 24) return false;
  size_t digits = 0;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ++digits;
    } else if (!std::strchr("+-() ", c)) {
      return false;
    }
  }
  if (digits < 8 || digits > 15) return false;
  std::string k = ToLower(key);
  return s.front() == '+' || k.find("phone") != std::string::npos ||
         k.find("mobile") != std::string::npos || k == "tel";
}

bool IsCredentialKey(const std::string& key) {
  std::string k = StripPunctuation(key);
  for (const char* w : {"token", "secret", "password", "passwd", "apikey", "accesskey"}) {
    if (k.find(w) != std::string::npos) return true;
  }
  return false;
}

bool IsGeoObject(const nlohmann::json& obj) {
  auto num = [&](std::initializer_list<const char*> keys, double limit) {
    for (const char* k : keys) {
      auto it = obj.find(k);
      if (it != obj.end() && it->is_number() && std::fabs(it->get<double>()) <= limit) return true;
    }
    return false;
  };
  return num({"lat", "latitude"}, 90) && num({"lng", "lon", "long", "longitude"}, 180);
}

void Flatten(const nlohmann::json& v, const std::string& path, const std::string& key,
             const std::set<std::string>& request_names,
             const std::set<std::string>& request_values, std::set<SensitivityHit>& hits) {
  if (v.is_object()) {
    if (IsGeoObject(v)) hits.insert({path.empty() ? "$" : path, "geo-coordinates"});
    for (const auto& [k, child] : v.items()) {
      Flatten(child, path.empty() ? k : path + "." + k, k, request_names, request_values, hits);
    }
    return;
  }
  if (v.is_array()) {
    for (const auto& child : v) Flatten(child, path + "[]", key, request_names, request_values, hits);
    return;
  }
  if (request_names.count(ToLower(key))) return;
  std::string text = v.is_string() ? v.get<std::string>() : v.dump();
  if (request_values.count(text)) return;
  std::string cls;
  if (PlausibleEpoch(v) || (v.is_string() && IsIsoTimestamp(text))) {
    cls = "timestamp";
  } else if (v.is_string() && IsEmail(text)) {
    cls = "email";
  } else if (v.is_string() && IsPhone(key, text)) {
    cls = "phone";
  } else if (!key.empty() && IsCredentialKey(key) && !v.is_null() && !v.is_boolean()) {
    cls = "credential";
  }
  if (!cls.empty()) hits.insert({path, cls});
}

}  // namespace

std::vector<Finding> DetectExcessiveDataExposure(const Endpoint& e, const HttpResponse& baseline,
                                                 int probe_index, std::string* note) {
  std::vector<Finding> out;
  auto set_note = [&](std::string msg) {
    if (note) *note = std::move(msg);
  };
  if (baseline.transport_error) return out;
  if (!Is2xx(baseline)) {
    set_note("excessive-data-exposure skipped: baseline status " + std::to_string(baseline.status));
    return out;
  }
  if (Trim(baseline.body).empty()) return out;
  nlohmann::json body = nlohmann::json::parse(baseline.body, nullptr, false);
  if (body.is_discarded() || (!body.is_object() && !body.is_array())) {
    set_note(std::string(ErrorCodeName(ErrorCode::kUnparseableBody)) +
             ": baseline body is not JSON" + (baseline.truncated ? " (truncated)" : ""));
    return out;
  }
  std::set<std::string> names, values;
  for (const auto& p : e.params) {
    names.insert(ToLower(p.name));
    size_t dot = p.name.rfind('.');
    if (dot != std::string::npos) names.insert(ToLower(p.name.substr(dot + 1)));
    if (!p.example.empty()) values.insert(p.example);
  }
  std::set<SensitivityHit> hits;
  Flatten(body, "", "", names, values, hits);
  if (hits.empty()) return out;
  Finding f = MakeFinding("EXCESSIVE_DATA_EXPOSURE", e);
  f.method = BaselineMethod(e);
  f.probe_index = probe_index;
  std::string fields;
  for (const auto& h : hits) fields += (fields.empty() ? "" : ", ") + h.path + " (" + h.cls + ")";
  f.evidence = f.method + " " + e.Key() + " -> " + std::to_string(baseline.status) +
               "; response discloses fields not sent by the client: " + fields;
  out.push_back(std::move(f));
  return out;
}

double AggregateConfidence(int corroborations, int trials) {
  if (trials < 1 || corroborations <= 0) return 0;
  return std::clamp(static_cast<double>(corroborations) / trials, 0.0, 1.0);
}

RateLimiter::RateLimiter(double rps)
    : interval_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(1.0 / rps))),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::Acquire() {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto now = std::chrono::steady_clock::now();
    slot = std::max(next_, now);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

namespace {

std::optional<Url> ResolveLocation(const Url& base, const std::string& location) {
  if (location.empty()) return std::nullopt;
  if (location.starts_with("http://") || location.starts_with("https://")) {
    return ParseHttpUrl(location);
  }
  if (location.starts_with("//")) return ParseHttpUrl(base.scheme + ":" + location);
  Url u = base;
  std::string rel = location;
  u.query.clear();
  if (size_t hash = rel.find('#'); hash != std::string::npos) rel.resize(hash);
  if (size_t q = rel.find('?'); q != std::string::npos) {
    u.query = rel.substr(q + 1);
    rel.resize(q);
  }
  if (rel.starts_with("/")) {
    u.path = rel;
  } else {
    size_t slash = u.path.rfind('/');
    u.path = (slash == std::string::npos ? "/" : u.path.substr(0, slash + 1)) + rel;
  }
  return u;
}

struct Job {
  size_t endpoint;
  size_t probe;
};

}  // namespace

ScanResult Scan(const std::vector<Endpoint>& inventory, const ScanConfig& cfg,
                Transport& transport) {
  cfg.Validate();
  ScanResult result;
  if (!cfg.active) {
    result.notes.push_back({"", "active scanning disabled (pass --active to probe endpoints)"});
    return result;
  }
  if (NetworkForcedOff()) {
    result.notes.push_back({"", "active scanning disabled by ANDROSCAN_NO_NET=1"});
    return result;
  }

  std::vector<const Endpoint*> targets;
  for (const auto& e : inventory) {
    if (cfg.scope == ScopeFilter::kInternalOnly && e.classification.external) continue;
    targets.push_back(&e);
  }
  std::vector<std::vector<Probe>> plans;
  std::vector<std::vector<HttpResponse>> responses;
  std::vector<Job> jobs;
  for (size_t i = 0; i < targets.size(); ++i) {
    plans.push_back(PlanProbes(*targets[i], cfg));
    responses.emplace_back(plans.back().size());
    for (size_t j = 0; j < plans.back().size(); ++j) jobs.push_back({i, j});
  }

  RateLimiter limiter(cfg.requests_per_second_cap);
  std::atomic<size_t> next_job{0};
  std::atomic<size_t> sent{0};
  std::mutex notes_mu;
  std::vector<ScanNote> redirect_notes;

  auto worker = [&]() {
    while (true) {
      size_t k = next_job.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      HttpRequest req = plans[job.endpoint][job.probe].request;
      HttpResponse resp;
      for (int hop = 0;; ++hop) {
        limiter.Acquire();
        resp = transport.Send(req);
        sent.fetch_add(1);
        if (resp.transport_error || resp.status < 300 || resp.status >= 400) break;
        const std::string* loc = resp.Header("Location");
        if (!loc || hop >= cfg.max_redirects) break;
        auto target = ResolveLocation(req.url, *loc);
        if (!target) break;
        if (target->host != req.url.host) {
          std::lock_guard<std::mutex> lock(notes_mu);
          redirect_notes.push_back({targets[job.endpoint]->Key(),
                                    "cross-host redirect to " + target->host + " not followed"});
          break;
        }
        req.url = *target;
        if (resp.status != 307 && resp.status != 308) {
          if (req.method != "HEAD") req.method = "GET";
          req.body.clear();
          std::erase_if(req.headers,
                        [](const KeyValue& h) { return EqualsIgnoreCase(h.key, "Content-Type"); });
        }
      }
      responses[job.endpoint][job.probe] = std::move(resp);
    }
  };
  int threads = std::max(1, std::min<int>(cfg.max_concurrency, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads && !jobs.empty(); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Analysis runs only after every probe has finished, so findings depend on
  // the responses and never on their arrival order.
  for (size_t i = 0; i < targets.size(); ++i) {
    const Endpoint& e = *targets[i];
    const auto& plan = plans[i];
    const auto& res = responses[i];
    const HttpResponse& baseline = res[0];
    if (baseline.transport_error) {
      result.notes.push_back({e.Key(), "unreachable: " + *baseline.transport_error});
    } else {
      auto hdr = CheckSecurityHeaders(e, baseline, 0);
      result.findings.insert(result.findings.end(), hdr.begin(), hdr.end());
      std::string note;
      auto ede = DetectExcessiveDataExposure(e, baseline, 0, &note);
      result.findings.insert(result.findings.end(), ede.begin(), ede.end());
      if (!note.empty()) result.notes.push_back({e.Key(), note});
    }
    size_t failed = 0;
    for (size_t j = 1; j < res.size(); ++j) failed += res[j].transport_error ? 1 : 0;
    if (failed && !baseline.transport_error) {
      result.notes.push_back(
          {e.Key(), std::to_string(failed) + " probe(s) skipped after transport errors"});
    }
    auto methods = AnalyzeMethods(e, plan, res);
    result.findings.insert(result.findings.end(), methods.begin(), methods.end());
    auto fuzz = AnalyzeFuzz(e, plan, res, cfg.fuzz_iterations_per_param);
    result.findings.insert(result.findings.end(), fuzz.begin(), fuzz.end());
  }
  std::sort(redirect_notes.begin(), redirect_notes.end(), [](const auto& a, const auto& b) {
    return std::tie(a.endpoint, a.message) < std::tie(b.endpoint, b.message);
  });
  redirect_notes.erase(std::unique(redirect_notes.begin(), redirect_notes.end()),
                       redirect_notes.end());
  result.notes.insert(result.notes.end(), redirect_notes.begin(), redirect_notes.end());
  SortFindings(result.findings);
  result.probes_sent = sent.load();
  result.endpoints_scanned = targets.size();
  return result;
}

void SortFindings(std::vector<Finding>& findings) {
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.severity, a.endpoint, a.check_id, a.probe_index, a.parameter, a.method) <
           std::tie(b.severity, b.endpoint, b.check_id, b.probe_index, b.parameter, b.method);
  });
}

}  // namespace androscan
