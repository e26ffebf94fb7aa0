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

// Helpers shared by the unit tests and the acceptance runner.

#ifndef ANDROSCAN_TESTS_SUPPORT_H_
#define ANDROSCAN_TESTS_SUPPORT_H_

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "androscan/apk.h"
#include "androscan/axml.h"
#include "androscan/dex.h"
#include "androscan/error.h"
#include "androscan/mock_backend.h"
#include "androscan/pipeline.h"

namespace androscan::testing {

inline std::filesystem::path FixtureDir() { return ANDROSCAN_FIXTURE_DIR; }
inline std::filesystem::path GoldenDir() { return ANDROSCAN_GOLDEN_DIR; }
inline std::filesystem::path Fixture(const std::string& name) { return FixtureDir() / name; }

inline std::vector<uint8_t> ReadBytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string ReadString(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "androscan") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

// A running mock backend plus the --connect-to value that routes every
// inventory host to it.
class RunningMock {
 public:
  explicit RunningMock(MockProfile profile)
      : server_(std::make_unique<MockServer>(std::move(profile))) {
    server_->Start(0);
  }
  explicit RunningMock(const std::string& name) : RunningMock(MockProfile::Load(name)) {}
  MockServer& server() { return *server_; }
  int port() const { return server_->port(); }
  std::string connect_to() const { return "*=http://127.0.0.1:" + std::to_string(port()); }
  HttpTransportOptions transport_options(int timeout_ms = 5000) const {
    HttpTransportOptions o;
    o.timeout_ms = timeout_ms;
    o.connect_to.push_back(ParseConnectTo(connect_to()));
    return o;
  }

 private:
  std::unique_ptr<MockServer> server_;
};

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliRun RunCliArgs(const std::vector<std::string>& args, Transport* transport = nullptr) {
  std::vector<const char*> argv = {"androscan"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err, transport);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Classified inventory of a fixture app, through the real extract and
// classify stages.
inline std::vector<Endpoint> FixtureInventory(const std::string& app) {
  ExtractOptions o;
  o.apk = Fixture(app + ".apk");
  o.traces.push_back(Fixture(app + ".ndjson"));
  std::vector<Endpoint> inv = RunExtract(o).inventory;
  ClassifyAll(inv, VendorList::Bundled());
  return inv;
}

// Seeded byte-level mutations: flips, overwrites, truncation, insertion,
// block duplication and 32-bit boundary values at random offsets.
inline std::vector<uint8_t> Mutate(std::vector<uint8_t> data, std::mt19937_64& rng) {
  auto pick = [&](uint64_t n) { return n ? rng() % n : 0; };
  int rounds = 1 + static_cast<int>(pick(4));
  for (int i = 0; i < rounds; ++i) {
    switch (pick(6)) {
      case 0:
        if (!data.empty()) data[pick(data.size())] ^= static_cast<uint8_t>(1u << pick(8));
        break;
      case 1:
        if (!data.empty()) data[pick(data.size())] = static_cast<uint8_t>(rng());
        break;
      case 2:
        data.resize(pick(data.size() + 1));
        break;
      case 3:
        data.insert(data.begin() + static_cast<std::ptrdiff_t>(pick(data.size() + 1)),
                    static_cast<uint8_t>(rng()));
        break;
      case 4:
        if (data.size() > 8) {
          size_t from = pick(data.size() - 4), len = 1 + pick(std::min<size_t>(64, data.size() - from));
          std::vector<uint8_t> block(data.begin() + from, data.begin() + from + len);
          data.insert(data.begin() + static_cast<std::ptrdiff_t>(pick(data.size())), block.begin(),
                      block.end());
        }
        break;
      case 5:
        if (data.size() >= 4) {
          static const uint32_t kValues[] = {0, 1, 0x7fffffff, 0x80000000, 0xffffffff, 0xfffffff0};
          uint32_t v = kValues[pick(6)];
          size_t at = pick(data.size() - 3);
          for (int b = 0; b < 4; ++b) data[at + b] = static_cast<uint8_t>(v >> (8 * b));
        }
        break;
    }
  }
  return data;
}

// Feeds one input of the given kind through every parser that accepts it.
// androscan::Error is the defined failure path and propagates; anything
// else is a bug.
enum class InputKind { kApk, kAxml, kDex, kTrace };

inline void ExerciseInput(InputKind kind, const std::vector<uint8_t>& bytes) {
  auto dex_pass = [](const std::vector<uint8_t>& b) {
    DexFile dex = ParseDex(b);
    ExtractUrls(dex);
    ExtractLocalUris(dex);
    FindEntryPointRefs(dex, EntryPointList::Bundled());
  };
  switch (kind) {
    case InputKind::kApk: {
      ApkArchive apk = OpenApkBytes(bytes, "mutant.apk");
      for (const auto& e : apk.entries()) {
        std::vector<uint8_t> payload;
        try {
          payload = ReadEntry(apk, e.name);
        } catch (const Error&) {
          continue;
        }
        try {
          if (e.name == apk.manifest_entry().name) DecodeManifest(payload);
          if (DexEntryNumber(e.name) > 0) dex_pass(payload);
        } catch (const Error&) {
        }
      }
      return;
    }
    case InputKind::kAxml:
      DecodeManifest(bytes);
      return;
    case InputKind::kDex:
      dex_pass(bytes);
      return;
    case InputKind::kTrace: {
      TraceFile tf = ParseTraceText(std::string(bytes.begin(), bytes.end()));
      BuildInventory({}, tf.traces);
      for (const auto& t : tf.traces) FlagEncryptedParams(t);
      return;
    }
  }
}

struct RobustnessStats {
  size_t cases = 0;
  size_t accepted = 0;
  std::map<std::string, size_t> errors;  // ErrorCodeName -> count
  std::vector<std::string> undefined;   // non-Error exceptions
};

// Seeds are the fixture files themselves: every APK, its manifest and DEX
// entries, and each trace file.
inline RobustnessStats RunMutationCampaign(size_t cases, uint64_t seed) {
  std::vector<std::pair<InputKind, std::vector<uint8_t>>> seeds;
  for (const char* app : {"sample", "bank", "hirect", "nodex"}) {
    std::vector<uint8_t> apk_bytes = ReadBytes(Fixture(std::string(app) + ".apk"));
    seeds.emplace_back(InputKind::kApk, apk_bytes);
    ApkArchive apk = OpenApkBytes(apk_bytes, app);
    seeds.emplace_back(InputKind::kAxml, ReadEntry(apk, apk.manifest_entry().name));
    for (const ArchiveEntry* d : apk.dex_entries()) {
      seeds.emplace_back(InputKind::kDex, ReadEntry(apk, d->name));
    }
  }
  for (const char* t : {"bank.ndjson", "hirect.ndjson", "nodex.ndjson"}) {
    seeds.emplace_back(InputKind::kTrace, ReadBytes(Fixture(t)));
  }
  std::mt19937_64 rng(seed);
  RobustnessStats stats;
  for (size_t i = 0; i < cases; ++i) {
    const auto& [kind, original] = seeds[i % seeds.size()];
    std::vector<uint8_t> mutant = Mutate(original, rng);
    ++stats.cases;
    try {
      ExerciseInput(kind, mutant);
      ++stats.accepted;
    } catch (const Error& e) {
      ++stats.errors[ErrorCodeName(e.code())];
    } catch (const std::exception& e) {
      stats.undefined.push_back("case " + std::to_string(i) + ": " + e.what());
    }
  }
  return stats;
}

}  // namespace androscan::testing

#endif  // ANDROSCAN_TESTS_SUPPORT_H_
