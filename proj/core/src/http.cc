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

#include "androscan/http.h"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "androscan/error.h"
#include "androscan/text.h"

namespace androscan {

namespace {

std::atomic<uint64_t> g_connection_attempts{0};

HttpResponse ErrorResponse(std::string message) {
  HttpResponse r;
  r.transport_error = std::move(message);
  return r;
}

bool HasHeader(const std::vector<KeyValue>& headers, std::string_view name) {
  return std::any_of(headers.begin(), headers.end(),
                     [&](const KeyValue& h) { return EqualsIgnoreCase(h.key, name); });
}

}  // namespace

const std::string* HttpResponse::Header(std::string_view name) const {
  for (const auto& h : headers) {
    if (EqualsIgnoreCase(h.key, name)) return &h.value;
  }
  return nullptr;
}

bool NetworkForcedOff() {
  const char* v = std::getenv("ANDROSCAN_NO_NET");
  return v && std::string_view(v) == "1";
}

uint64_t ConnectionAttempts() { return g_connection_attempts.load(); }

ConnectTo ParseConnectTo(std::string_view spec) {
  auto bad = [&]() {
    return Error(ErrorCode::kInvalidArgument,
                 "--connect-to expects HOST[:PORT]=[http://]ADDR:PORT, got " + std::string(spec));
  };
  auto parse_port = [&](std::string_view s) {
    int p = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p);
    if (ec != std::errc() || ptr != s.data() + s.size() || p <= 0 || p > 65535) throw bad();
    return p;
  };
  size_t eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0) throw bad();
  ConnectTo c;
  std::string_view from = spec.substr(0, eq), to = spec.substr(eq + 1);
  if (size_t colon = from.rfind(':'); colon != std::string_view::npos) {
    c.port = parse_port(from.substr(colon + 1));
    from = from.substr(0, colon);
  }
  c.host = ToLower(from);
  if (to.starts_with("http://")) {
    c.plain_http = true;
    to.remove_prefix(7);
  }
  size_t colon = to.rfind(':');
  if (colon == std::string_view::npos || colon == 0) throw bad();
  c.address = std::string(to.substr(0, colon));
  c.address_port = parse_port(to.substr(colon + 1));
  return c;
}

HttpResponse HttpTransport::Send(const HttpRequest& request) {
  if (NetworkForcedOff()) return ErrorResponse("network disabled by ANDROSCAN_NO_NET=1");
  std::string scheme = request.url.scheme;
  std::string address = request.url.host;
  int port = request.url.EffectivePort();
  for (const auto& c : options_.connect_to) {
    if ((c.host == "*" || c.host == request.url.host) && (!c.port || *c.port == port)) {
      address = c.address;
      port = c.address_port;
      if (c.plain_http) scheme = "http";
      break;
    }
  }
  httplib::Client cli(scheme + "://" + address + ":" + std::to_string(port));
  cli.set_connection_timeout(std::chrono::milliseconds(options_.timeout_ms));
  cli.set_read_timeout(std::chrono::milliseconds(options_.timeout_ms));
  cli.set_write_timeout(std::chrono::milliseconds(options_.timeout_ms));
  cli.set_keep_alive(false);
  cli.set_follow_location(false);
  if (scheme == "https") cli.enable_server_certificate_verification(options_.verify_tls);

  httplib::Request req;
  req.method = request.method;
  req.path = request.url.path + (request.url.query.empty() ? "" : "?" + request.url.query);
  for (const auto& h : request.headers) req.headers.emplace(h.key, h.value);
  if (!HasHeader(request.headers, "Host")) {
    std::string host = request.url.host;
    if (request.url.port) host += ":" + std::to_string(*request.url.port);
    req.headers.emplace("Host", host);
  }
  req.body = request.body;

  HttpResponse out;
  req.content_receiver = [&out](const char* data, size_t len, uint64_t, uint64_t) {
    size_t room = kBodySampleCap - std::min(kBodySampleCap, out.body.size());
    if (len > room) out.truncated = true;
    out.body.append(data, std::min(len, room));
    return true;
  };

  httplib::Response res;
  httplib::Error err = httplib::Error::Success;
  g_connection_attempts.fetch_add(1);
  auto start = std::chrono::steady_clock::now();
  bool ok = cli.send(req, res, err);
  out.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (!ok) {
    out.body.clear();
    out.truncated = false;
    out.transport_error = httplib::to_string(err);
    return out;
  }
  out.status = res.status;
  for (const auto& [k, v] : res.headers) out.headers.push_back({k, v});
  return out;
}

HttpResponse RecordingTransport::Send(const HttpRequest& request) {
  std::lock_guard<std::mutex> lock(mu_);
  requests_.push_back(request);
  return ErrorResponse("recording stub: no network");
}

size_t RecordingTransport::attempts() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_.size();
}

std::vector<HttpRequest> RecordingTransport::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_;
}

std::string RequestKey(const HttpRequest& request) {
  std::vector<std::string> headers;
  for (const auto& h : request.headers) headers.push_back(ToLower(h.key) + ": " + h.value);
  std::sort(headers.begin(), headers.end());
  std::string key = request.method + " " + request.url.ToString();
  for (const auto& h : headers) key += "\n" + h;
  key += "\n\n" + Base64Encode(request.body);
  return key;
}

namespace {

using Json = nlohmann::json;

Json ResponseToJson(const std::string& key, const HttpResponse& r) {
  Json headers = Json::array();
  for (const auto& h : r.headers) headers.push_back({h.key, h.value});
  Json j = {{"key", key},
            {"status", r.status},
            {"headers", headers},
            {"body_b64", Base64Encode(r.body)},
            {"truncated", r.truncated}};
  j["error"] = r.transport_error ? Json(*r.transport_error) : Json(nullptr);
  return j;
}

}  // namespace

HttpResponse TapeRecorder::Send(const HttpRequest& request) {
  HttpResponse r = inner_.Send(request);
  std::lock_guard<std::mutex> lock(mu_);
  records_.emplace_back(RequestKey(request), r);
  return r;
}

void TapeRecorder::Save(const std::filesystem::path& path) const {
  std::vector<std::string> lines;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& [key, r] : records_) {
      lines.push_back(ResponseToJson(key, r).dump(-1, ' ', false,
                                                  nlohmann::json::error_handler_t::replace));
    }
  }
  // Identical requests may finish in any order; sorting whole lines keeps
  // the tape byte-stable.
  std::sort(lines.begin(), lines.end());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed on " + path.string());
}

ReplayTransport ReplayTransport::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot open " + path.string());
  ReplayTransport t;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    try {
      if (j.is_discarded()) throw std::runtime_error("not JSON");
      HttpResponse r;
      r.status = j.at("status").get<int>();
      for (const auto& h : j.at("headers")) {
        r.headers.push_back({h.at(0).get<std::string>(), h.at(1).get<std::string>()});
      }
      if (!Base64Decode(j.at("body_b64").get<std::string>(), &r.body)) {
        throw std::runtime_error("bad body_b64");
      }
      r.truncated = j.value("truncated", false);
      if (j.contains("error") && j["error"].is_string()) r.transport_error = j["error"].get<std::string>();
      t.tape_[j.at("key").get<std::string>()].push_back(std::move(r));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ":" + std::to_string(line_no) + ": bad tape record: " + e.what());
    }
  }
  return t;
}

HttpResponse ReplayTransport::Send(const HttpRequest& request) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = tape_.find(RequestKey(request));
  if (it == tape_.end() || it->second.empty()) {
    return ErrorResponse("replay: no recorded response for " + request.method + " " +
                         request.url.ToString());
  }
  HttpResponse r = it->second.front();
  if (it->second.size() > 1) it->second.pop_front();
  return r;
}

}  // namespace androscan
