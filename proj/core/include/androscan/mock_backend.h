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

#ifndef ANDROSCAN_MOCK_BACKEND_H_
#define ANDROSCAN_MOCK_BACKEND_H_

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "androscan/trace.h"

namespace androscan {

// Flaw names accepted in profiles.
inline constexpr const char* kFlawOmitSecurityHeaders = "omit-security-headers";
inline constexpr const char* kFlawAllowAllMethods = "allow-all-methods";
inline constexpr const char* kFlawErrorOnOversized = "error-on-oversized";
inline constexpr const char* kFlawReflectParams = "reflect-params";
inline constexpr const char* kFlawExposeSensitive = "expose-timestamps-and-emails";

struct MockRoute {
  std::string method;
  std::string path;  // "{name}" segments match any single non-empty segment
  int status = 200;
  std::vector<KeyValue> headers;
  std::string body;
  std::set<std::string> flaws;
  std::vector<std::string> oversized_params;  // empty = every parameter
  size_t oversized_limit = 1024;
  std::vector<std::string> sensitive_fields;
  int delay_ms = 0;  // fixed service time before answering
};

struct MockProfile {
  std::string name;
  std::set<std::string> flaws;
  std::vector<MockRoute> routes;

  bool HasFlaw(const MockRoute& route, std::string_view flaw) const;

  // Throws Error(kInvalidArgument).
  static MockProfile Parse(std::string_view json_text);
  // A bundled profile name ("bank", "hirect") or a JSON file path.
  static MockProfile Load(std::string_view name_or_path);
};

struct MockRequest {
  std::string method;
  std::string path;
  std::string query;
  std::vector<KeyValue> headers;
  std::string body;
};

struct MockResponse {
  int status = 0;
  std::vector<KeyValue> headers;
  std::string body;
};

// The server's behavior as a pure function.
MockResponse HandleMockRequest(const MockProfile& profile, const MockRequest& request);

struct MockLogEntry {
  std::string method;
  std::string path;
  std::string query;
  int status = 0;
  int64_t start_us = 0;  // steady clock, relative to Start()
  int64_t end_us = 0;
};

class MockServer {
 public:
  explicit MockServer(MockProfile profile);
  ~MockServer();
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Throws Error(kPortInUse).
  void Start(int port = 0, const std::string& host = "127.0.0.1");
  // Blocks serving on the calling thread until Stop() from another thread.
  void Run(int port, const std::string& host = "127.0.0.1");
  void Stop();
  int port() const;

  std::vector<MockLogEntry> Log() const;
  void ClearLog();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace androscan

#endif  // ANDROSCAN_MOCK_BACKEND_H_
