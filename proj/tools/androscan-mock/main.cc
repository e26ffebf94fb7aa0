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

// Serves a mock backend profile until SIGINT/SIGTERM.

#include <pthread.h>

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "androscan/error.h"
#include "androscan/mock_backend.h"

int main(int argc, char** argv) {
  std::string profile_name = "bank";
  int port = 8888;
  std::string host = "127.0.0.1";
  bool log = false;
  CLI::App app{"Local mock backend with configurable flaws", "androscan-mock"};
  app.add_option("--profile", profile_name, "Bundled profile (bank, hirect) or JSON file")
      ->capture_default_str();
  app.add_option("--port", port, "TCP port; 0 picks a free one")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  app.add_option("--host", host, "Bind address")->capture_default_str();
  app.add_flag("--log", log, "Print each request on exit");
  CLI11_PARSE(app, argc, argv);

  try {
    androscan::MockServer server(androscan::MockProfile::Load(profile_name));
    // Blocked before Start() so the server threads inherit the mask and the
    // signals are only ever taken by sigwait below.
    sigset_t mask;
    sigemptyset(&mask);
    sigaddset(&mask, SIGINT);
    sigaddset(&mask, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &mask, nullptr);
    server.Start(port, host);
    std::cout << "androscan-mock: profile " << profile_name << " on http://" << host << ":"
              << server.port() << std::endl;
    int sig = 0;
    sigwait(&mask, &sig);
    server.Stop();
    if (log) {
      for (const auto& e : server.Log()) {
        std::cout << e.start_us << " " << e.method << " " << e.path
                  << (e.query.empty() ? "" : "?" + e.query) << " " << e.status << "\n";
      }
    }
  } catch (const androscan::Error& e) {
    std::cerr << "androscan-mock: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
