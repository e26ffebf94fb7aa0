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

#ifndef ANDROSCAN_REPORT_H_
#define ANDROSCAN_REPORT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "androscan/axml.h"
#include "androscan/dex.h"
#include "androscan/endpoint.h"
#include "androscan/scanner.h"
#include "androscan/secrets.h"

namespace androscan {

struct ReportSecret {
  std::string value;  // redacted
  std::string source;
  std::string detector;
  double entropy_bits_per_char = 0;
  double confidence = 0;

  bool operator==(const ReportSecret&) const = default;
};

ReportSecret ToReportSecret(const SecretCandidate& c);

struct EncryptedParam {
  std::string endpoint;
  std::string param_path;
  double entropy_bits_per_char = 0;

  bool operator==(const EncryptedParam&) const = default;
};

struct EntryPointUse {
  std::string entry_point;
  std::string class_descriptor;
  std::string method_name;
  std::string referencing_class;

  bool operator==(const EntryPointUse&) const = default;
};

struct ReportStats {
  int total_apis = 0;
  int external_apis = 0;
  int internal_apis = 0;
  int vulnerabilities = 0;  // distinct check ids among findings

  bool operator==(const ReportStats&) const = default;
};

struct AppInfo {
  std::string package_name;
  std::string apk_digest;  // SHA-256 hex of the APK bytes
  std::optional<int> min_sdk;
  std::optional<int> target_sdk;

  bool operator==(const AppInfo&) const = default;
};

struct Report {
  std::string tool_version;
  AppInfo app;
  std::string generated_at;
  std::vector<std::string> permissions;
  std::vector<Endpoint> endpoints;
  std::vector<ReportSecret> secrets;
  std::vector<EncryptedParam> encrypted_params;
  std::vector<EntryPointUse> entry_points;
  std::vector<Finding> findings;
  std::vector<ScanNote> notes;
  ReportStats stats;
  std::optional<std::string> owner_contact;

  bool operator==(const Report&) const = default;
};

struct ReportInputs {
  AppInfo app;
  std::vector<std::string> permissions;
  std::vector<Endpoint> inventory;
  std::vector<ReportSecret> secrets;
  std::vector<EntryPointUse> entry_points;
  std::vector<Finding> findings;
  std::vector<ScanNote> notes;
  std::string generated_at;
  std::optional<std::string> owner_contact;
};

// Sorts, derives encrypted_params and stats, and checks the invariants.
Report AssembleReport(ReportInputs inputs);
ReportStats ComputeStats(const std::vector<Endpoint>& endpoints,
                         const std::vector<Finding>& findings);
// Throws Error(kInvalidArgument) naming the first violated invariant.
void ValidateReport(const Report& r);

// Canonical: sorted keys, two-space indent, UTF-8, trailing newline.
std::string RenderJson(const Report& r);
// Throws Error(kInvalidArgument).
Report ParseReportJson(std::string_view text);
std::string RenderMarkdown(const Report& r);

// SHA-256 hex digest.
std::string Sha256Hex(const std::vector<uint8_t>& data);

}  // namespace androscan

#endif  // ANDROSCAN_REPORT_H_
