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

#ifndef ANDROSCAN_SCANNER_H_
#define ANDROSCAN_SCANNER_H_

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "androscan/endpoint.h"
#include "androscan/http.h"

namespace androscan {

enum class Severity { kHigh, kMedium, kLow };
const char* SeverityName(Severity s);  // "High", "Medium", "Low"
// Case-insensitive. Throws Error(kInvalidArgument).
Severity ParseSeverity(std::string_view s);

enum class ScopeFilter { kInternalOnly, kAll };

struct ScanConfig {
  int timeout_ms = 5000;
  int max_concurrency = 8;
  double requests_per_second_cap = 10;
  int fuzz_iterations_per_param = 8;
  bool active = false;
  ScopeFilter scope = ScopeFilter::kInternalOnly;
  uint64_t seed = 0;
  int max_redirects = 3;

  // Throws Error(kInvalidArgument) when a numeric field is not positive.
  void Validate() const;
};

struct Finding {
  std::string check_id;
  std::string owasp_category;
  std::optional<int> owasp_api_rank;
  std::string endpoint;  // Endpoint::Key()
  Severity severity = Severity::kLow;
  double confidence = 0;
  std::string evidence;
  std::string remediation;
  int probe_index = 0;
  std::string parameter;  // "<location>:<name>", empty when not parameter-specific
  std::string method;

  bool operator==(const Finding&) const = default;
};

struct ScanNote {
  std::string endpoint;
  std::string message;

  bool operator==(const ScanNote&) const = default;
};

struct ScanResult {
  std::vector<Finding> findings;
  std::vector<ScanNote> notes;
  size_t probes_sent = 0;
  size_t endpoints_scanned = 0;
};

// Fixed check table.
struct CheckInfo {
  const char* check_id;
  Severity severity;
  int owasp_api_rank;
  const char* owasp_category;
  const char* remediation;
};
const CheckInfo& LookupCheck(std::string_view check_id);
const std::vector<CheckInfo>& AllChecks();

enum class PayloadClass {
  kOversized,
  kFormatSpecifier,
  kMetacharacters,
  kExtremeInteger,
  kEmpty,
  kNullLiteral,
};
inline constexpr int kPayloadClassCount = 6;
const char* PayloadClassName(PayloadClass c);

enum class ProbeKind { kBaseline, kMethod, kFuzz };

struct Probe {
  int index = 0;  // position within the endpoint's plan
  ProbeKind kind = ProbeKind::kBaseline;
  std::string method;
  std::string param;  // fuzz target, "<location>:<name>"
  PayloadClass payload_class = PayloadClass::kEmpty;
  std::string payload;
  HttpRequest request;
};

// Expected methods: e.methods (GET when empty), plus HEAD whenever GET.
std::vector<std::string> ExpectedMethods(const Endpoint& e);
std::string BaselineMethod(const Endpoint& e);

// Per-parameter payload classes and values. Pure function of the inputs.
std::vector<std::pair<PayloadClass, std::string>> FuzzSchedule(uint64_t seed,
                                                               const std::string& endpoint_key,
                                                               const ParamDescriptor& param,
                                                               int iterations);

// Request with every parameter at its example value, except the overridden
// one (by location and name) set to value; null_literal renders a JSON null.
HttpRequest BuildRequest(const Endpoint& e, const std::string& method, bool with_params,
                         const ParamDescriptor* override_param = nullptr,
                         const std::string& override_value = {}, bool null_literal = false);

// Baseline, seven method probes, then fuzz probes, in that order.
std::vector<Probe> PlanProbes(const Endpoint& e, const ScanConfig& cfg);

// Pure analyses over observed responses.
std::vector<Finding> CheckSecurityHeaders(const Endpoint& e, const HttpResponse& baseline,
                                          int probe_index);
std::vector<Finding> AnalyzeMethods(const Endpoint& e, const std::vector<Probe>& probes,
                                    const std::vector<HttpResponse>& results);
std::vector<Finding> AnalyzeFuzz(const Endpoint& e, const std::vector<Probe>& probes,
                                 const std::vector<HttpResponse>& results, int trials);
// note receives the reason when the body is not analyzable.
std::vector<Finding> DetectExcessiveDataExposure(const Endpoint& e, const HttpResponse& baseline,
                                                 int probe_index, std::string* note);

// corroborations / trials clamped to [0, 1].
double AggregateConfidence(int corroborations, int trials);

// Token bucket with capacity one: grants are at least 1/rps apart.
class RateLimiter {
 public:
  explicit RateLimiter(double rps);
  void Acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
};

// Runs every probe of every in-scope endpoint. Sends nothing unless
// cfg.active and the network is not forced off.
ScanResult Scan(const std::vector<Endpoint>& inventory, const ScanConfig& cfg,
                Transport& transport);

void SortFindings(std::vector<Finding>& findings);

}  // namespace androscan

#endif  // ANDROSCAN_SCANNER_H_
