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

#include "androscan/mock_backend.h"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "androscan/embedded.h"
#include "androscan/endpoint.h"
#include "androscan/error.h"
#include "androscan/text.h"
#include "androscan/url.h"

namespace androscan {

namespace {

using OJson = nlohmann::ordered_json;

const std::set<std::string> kKnownFlaws = {kFlawOmitSecurityHeaders, kFlawAllowAllMethods,
                                           kFlawErrorOnOversized, kFlawReflectParams,
                                           kFlawExposeSensitive};

const std::vector<KeyValue> kSecurityHeaders = {
    {"X-XSS-Protection", "1; mode=block"},
    {"X-Content-Type-Options", "nosniff"},
    {"X-Frame-Options", "DENY"},
    {"Strict-Transport-Security", "max-age=31536000; includeSubDomains"},
    {"Content-Security-Policy", "default-src 'none'"},
};

[[noreturn]] void Bad(const std::string& msg) {
  throw Error(ErrorCode::kInvalidArgument, "mock profile: " + msg);
}

std::set<std::string> ParseFlaws(const OJson& j, const std::string& where) {
  std::set<std::string> out;
  if (!j.is_array()) Bad(where + ": flaws must be an array");
  for (const auto& f : j) {
    if (!f.is_string() || !kKnownFlaws.count(f.get<std::string>())) {
      Bad(where + ": unknown flaw " + f.dump());
    }
    out.insert(f.get<std::string>());
  }
  return out;
}

std::vector<std::string> StringArray(const OJson& j, const std::string& where) {
  std::vector<std::string> out;
  if (!j.is_array()) Bad(where + " must be an array of strings");
  for (const auto& s : j) {
    if (!s.is_string()) Bad(where + " must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

bool PathMatches(const std::string& pattern, const std::string& path) {
  auto p = Split(pattern, '/');
  auto q = Split(path, '/');
  if (p.size() != q.size()) return false;
  for (size_t i = 0; i < p.size(); ++i) {
    bool wildcard = p[i].size() > 2 && p[i].front() == '{' && p[i].back() == '}';
    if (wildcard ? q[i].empty() : p[i] != q[i]) return false;
  }
  return true;
}

std::string HeaderValue(const std::vector<KeyValue>& headers, std::string_view name) {
  for (const auto& h : headers) {
    if (EqualsIgnoreCase(h.key, name)) return h.value;
  }
  return {};
}

// Query parameters followed by body parameters (form or one-level JSON).
std::vector<std::pair<std::string, std::string>> RequestParams(const MockRequest& r) {
  auto params = ParseQuery(r.query);
  if (r.body.empty()) return params;
  std::string ct = ToLower(HeaderValue(r.headers, "Content-Type"));
  OJson j = ct.find("json") != std::string::npos ? OJson::parse(r.body, nullptr, false)
                                                 : OJson(nullptr);
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object()) {
        for (const auto& [k2, v2] : v.items()) {
          params.emplace_back(k + "." + k2, v2.is_string() ? v2.get<std::string>() : v2.dump());
        }
      } else {
        params.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
  } else if (ct.find("json") == std::string::npos) {
    auto form = ParseQuery(r.body);
    params.insert(params.end(), form.begin(), form.end());
  }
  return params;
}

void StripFields(OJson& j, const std::set<std::string>& fields) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end();) {
      if (fields.count(it.key())) {
        it = j.erase(it);
      } else {
        StripFields(*it, fields);
        ++it;
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) StripFields(v, fields);
  }
}

MockResponse JsonError(int status, const char* message) {
  MockResponse r;
  r.status = status;
  r.headers.push_back({"Content-Type", "application/json"});
  r.body = std::string("{\"error\":\"") + message + "\"}";
  return r;
}

void AddSecurityHeaders(MockResponse& r) {
  for (const auto& h : kSecurityHeaders) {
    if (HeaderValue(r.headers, h.key).empty()) r.headers.push_back(h);
  }
}

}  // namespace

bool MockProfile::HasFlaw(const MockRoute& route, std::string_view flaw) const {
  std::string f(flaw);
  return flaws.count(f) || route.flaws.count(f);
}

MockProfile MockProfile::Parse(std::string_view json_text) {
  OJson j = OJson::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) Bad("not a JSON object");
  MockProfile p;
  try {
    p.name = j.value("name", "");
    if (j.contains("flaws")) p.flaws = ParseFlaws(j["flaws"], "profile");
    if (!j.contains("routes") || !j["routes"].is_array() || j["routes"].empty()) {
      Bad("routes must be a non-empty array");
    }
    size_t n = 0;
    for (const auto& rj : j["routes"]) {
      std::string where = "route " + std::to_string(n++);
      if (!rj.is_object()) Bad(where + " must be an object");
      MockRoute r;
      r.method = rj.value("method", "");
      std::transform(r.method.begin(), r.method.end(), r.method.begin(), ::toupper);
      r.path = rj.value("path", "");
      if (r.method.empty()) Bad(where + ": method is required");
      if (!r.path.starts_with("/")) Bad(where + ": path must start with '/'");
      r.status = rj.value("status", 200);
      if (r.status < 100 || r.status > 599) Bad(where + ": status out of range");
      if (rj.contains("headers")) {
        if (!rj["headers"].is_object()) Bad(where + ": headers must be an object");
        for (const auto& [k, v] : rj["headers"].items()) {
          if (!v.is_string()) Bad(where + ": header values must be strings");
          r.headers.push_back({k, v.get<std::string>()});
        }
      }
      if (rj.contains("body")) {
        r.body = rj["body"].is_string() ? rj["body"].get<std::string>() : rj["body"].dump();
      }
      if (rj.contains("flaws")) r.flaws = ParseFlaws(rj["flaws"], where);
      if (rj.contains("oversized_params")) {
        r.oversized_params = StringArray(rj["oversized_params"], where + ": oversized_params");
      }
      r.oversized_limit = rj.value("oversized_limit", static_cast<size_t>(1024));
      if (rj.contains("sensitive_fields")) {
        r.sensitive_fields = StringArray(rj["sensitive_fields"], where + ": sensitive_fields");
      }
      r.delay_ms = rj.value("delay_ms", 0);
      if (r.delay_ms < 0 || r.delay_ms > 60000) Bad(where + ": delay_ms out of range");
      p.routes.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    Bad(e.what());
  }
  return p;
}

MockProfile MockProfile::Load(std::string_view name_or_path) {
  if (auto bundled = EmbeddedFile(std::string(name_or_path) + ".json")) {
    return Parse(*bundled);
  }
  std::ifstream in{std::string(name_or_path), std::ios::binary};
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable,
                "no bundled profile or readable file named " + std::string(name_or_path));
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

MockResponse HandleMockRequest(const MockProfile& profile, const MockRequest& request) {
  std::string method = request.method == "HEAD" ? "GET" : request.method;
  const MockRoute* path_match = nullptr;
  const MockRoute* route = nullptr;
  std::vector<std::string> allowed;
  for (const auto& r : profile.routes) {
    if (!PathMatches(r.path, request.path)) continue;
    if (!path_match) path_match = &r;
    AddMethod(allowed, r.method);
    if (r.method == method && !route) route = &r;
  }
  MockResponse resp;
  bool omit_headers = profile.flaws.count(kFlawOmitSecurityHeaders) > 0;
  if (!path_match) {
    resp = JsonError(404, "not found");
  } else if (!route && !profile.HasFlaw(*path_match, kFlawAllowAllMethods)) {
    resp = JsonError(405, "method not allowed");
    std::string allow;
    for (const auto& m : allowed) allow += (allow.empty() ? "" : ", ") + m;
    resp.headers.push_back({"Allow", allow});
    omit_headers = omit_headers || profile.HasFlaw(*path_match, kFlawOmitSecurityHeaders);
  } else {
    const MockRoute& r = route ? *route : *path_match;
    omit_headers = profile.HasFlaw(r, kFlawOmitSecurityHeaders);
    auto params = RequestParams(request);
    bool oversized = false;
    if (profile.HasFlaw(r, kFlawErrorOnOversized)) {
      for (const auto& [k, v] : params) {
        bool listed = r.oversized_params.empty() ||
                      std::find(r.oversized_params.begin(), r.oversized_params.end(), k) !=
                          r.oversized_params.end();
        if (listed && v.size() > r.oversized_limit) oversized = true;
      }
    }
    if (oversized) {
      resp = JsonError(500, "internal server error");
    } else {
      resp.status = r.status;
      resp.headers = r.headers;
      resp.body = r.body;
      if (!r.sensitive_fields.empty() && !profile.HasFlaw(r, kFlawExposeSensitive)) {
        OJson j = OJson::parse(resp.body, nullptr, false);
        if (!j.is_discarded()) {
          StripFields(j, {r.sensitive_fields.begin(), r.sensitive_fields.end()});
          resp.body = j.dump();
        }
      }
      if (profile.HasFlaw(r, kFlawReflectParams)) {
        for (const auto& [k, v] : params) resp.body += "\n" + k + "=" + v;
      }
    }
  }
  if (!omit_headers) AddSecurityHeaders(resp);
  if (request.method == "HEAD") resp.body.clear();
  return resp;
}

struct MockServer::Impl {
  MockProfile profile;
  httplib::Server server;
  std::thread thread;
  std::chrono::steady_clock::time_point epoch = std::chrono::steady_clock::now();
  mutable std::mutex log_mu;
  std::vector<MockLogEntry> log;
  int port = 0;
  bool running = false;

  int64_t NowUs() const {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::steady_clock::now() - epoch)
        .count();
  }

  void Handle(const httplib::Request& req, httplib::Response& res) {
    int64_t start = NowUs();
    MockRequest mr;
    mr.method = req.method;
    mr.path = req.path;
    if (size_t q = req.target.find('?'); q != std::string::npos) {
      mr.query = req.target.substr(q + 1);
    }
    for (const auto& [k, v] : req.headers) mr.headers.push_back({k, v});
    mr.body = req.body;
    MockResponse out = HandleMockRequest(profile, mr);
    for (const auto& r : profile.routes) {
      if (r.delay_ms > 0 && PathMatches(r.path, mr.path)) {
        std::this_thread::sleep_for(std::chrono::milliseconds(r.delay_ms));
        break;
      }
    }
    res.status = out.status;
    std::string content_type = "text/plain";
    for (const auto& h : out.headers) {
      if (EqualsIgnoreCase(h.key, "Content-Type")) {
        content_type = h.value;
      } else {
        res.set_header(h.key, h.value);
      }
    }
    res.set_content(out.body, content_type);
    std::lock_guard<std::mutex> lock(log_mu);
    log.push_back({mr.method, mr.path, mr.query, out.status, start, NowUs()});
  }
};

MockServer::MockServer(MockProfile profile) : impl_(std::make_unique<Impl>()) {
  impl_->profile = std::move(profile);
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    impl_->Handle(req, res);
  };
  auto& s = impl_->server;
  // httplib dispatches HEAD to the GET handlers and drops the body.
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Put(".*", handler);
  s.Patch(".*", handler);
  s.Delete(".*", handler);
  s.Options(".*", handler);
  s.new_task_queue = [] { return new httplib::ThreadPool(32); };
  s.set_keep_alive_max_count(100);
  s.set_read_timeout(5, 0);
  s.set_write_timeout(5, 0);
  s.set_payload_max_length(8 * 1024 * 1024);
  // httplib's default adds SO_REUSEPORT, which would let a second server
  // share a busy port instead of failing with PortInUse.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
}

MockServer::~MockServer() { Stop(); }

namespace {

int Bind(httplib::Server& server, int port, const std::string& host) {
  if (port == 0) {
    int bound = server.bind_to_any_port(host);
    if (bound <= 0) throw Error(ErrorCode::kPortInUse, "no free port on " + host);
    return bound;
  }
  if (!server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kPortInUse, host + ":" + std::to_string(port) + " is not available");
  }
  return port;
}

}  // namespace

void MockServer::Start(int port, const std::string& host) {
  if (impl_->running) throw Error(ErrorCode::kInvalidArgument, "mock server already running");
  impl_->port = Bind(impl_->server, port, host);
  impl_->epoch = std::chrono::steady_clock::now();
  impl_->running = true;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void MockServer::Run(int port, const std::string& host) {
  if (impl_->running) throw Error(ErrorCode::kInvalidArgument, "mock server already running");
  impl_->port = Bind(impl_->server, port, host);
  impl_->epoch = std::chrono::steady_clock::now();
  impl_->running = true;
  impl_->server.listen_after_bind();
  impl_->running = false;
}

void MockServer::Stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->running = false;
}

int MockServer::port() const { return impl_->port; }

std::vector<MockLogEntry> MockServer::Log() const {
  std::lock_guard<std::mutex> lock(impl_->log_mu);
  return impl_->log;
}

void MockServer::ClearLog() {
  std::lock_guard<std::mutex> lock(impl_->log_mu);
  impl_->log.clear();
}

}  // namespace androscan
