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

#ifndef ANDROSCAN_HTTP_H_
#define ANDROSCAN_HTTP_H_

#include <atomic>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "androscan/trace.h"
#include "androscan/url.h"

namespace androscan {

inline constexpr size_t kBodySampleCap = 64 * 1024;

struct HttpRequest {
  std::string method;
  Url url;
  std::vector<KeyValue> headers;
  std::string body;
};

struct HttpResponse {
  int status = 0;
  std::vector<KeyValue> headers;
  std::string body;  // at most kBodySampleCap bytes
  bool truncated = false;
  double latency_ms = 0;
  std::optional<std::string> transport_error;

  const std::string* Header(std::string_view name) const;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse Send(const HttpRequest& request) = 0;
};

// True when ANDROSCAN_NO_NET=1 is set; no socket is ever opened then.
bool NetworkForcedOff();

// Process-wide count of TCP connection attempts made by HttpTransport.
uint64_t ConnectionAttempts();

// --connect-to HOST[:PORT]=[http://]ADDR:PORT. HOST may be "*".
struct ConnectTo {
  std::string host;
  std::optional<int> port;
  bool plain_http = false;
  std::string address;
  int address_port = 0;
};

// Throws Error(kInvalidArgument).
ConnectTo ParseConnectTo(std::string_view spec);

struct HttpTransportOptions {
  int timeout_ms = 5000;
  std::vector<ConnectTo> connect_to;
  bool verify_tls = true;
};

// HTTP/1.1 over TCP or TLS. One connection per request.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(HttpTransportOptions options) : options_(std::move(options)) {}
  HttpResponse Send(const HttpRequest& request) override;

 private:
  HttpTransportOptions options_;
};

// Never touches the network; counts and keeps every request it is handed.
class RecordingTransport : public Transport {
 public:
  HttpResponse Send(const HttpRequest& request) override;
  size_t attempts() const;
  std::vector<HttpRequest> requests() const;

 private:
  mutable std::mutex mu_;
  std::vector<HttpRequest> requests_;
};

// Deterministic identity of a request, used to key recorded responses.
std::string RequestKey(const HttpRequest& request);

// Wraps another transport and keeps (request, response) pairs so they can be
// written as a tape and replayed later.
class TapeRecorder : public Transport {
 public:
  explicit TapeRecorder(Transport& inner) : inner_(inner) {}
  HttpResponse Send(const HttpRequest& request) override;
  // NDJSON, one record per request, sorted by key for stable files.
  void Save(const std::filesystem::path& path) const;

 private:
  Transport& inner_;
  mutable std::mutex mu_;
  std::vector<std::pair<std::string, HttpResponse>> records_;
};

// Serves responses from a tape. Unknown requests get a transport error.
class ReplayTransport : public Transport {
 public:
  // Throws Error(kFileUnreadable | kInvalidArgument).
  static ReplayTransport Load(const std::filesystem::path& path);
  HttpResponse Send(const HttpRequest& request) override;

  ReplayTransport() = default;
  ReplayTransport(ReplayTransport&& other) noexcept : tape_(std::move(other.tape_)) {}

 private:
  std::mutex mu_;
  std::map<std::string, std::deque<HttpResponse>> tape_;
};

}  // namespace androscan

#endif  // ANDROSCAN_HTTP_H_
