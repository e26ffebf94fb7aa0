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

#ifndef ANDROSCAN_PIPELINE_H_
#define ANDROSCAN_PIPELINE_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "androscan/axml.h"
#include "androscan/dex.h"
#include "androscan/endpoint.h"
#include "androscan/http.h"
#include "androscan/report.h"
#include "androscan/scanner.h"
#include "androscan/secrets.h"

namespace androscan {

// Work-directory artifact names.
inline constexpr const char* kManifestArtifact = "manifest.json";
inline constexpr const char* kInventoryArtifact = "inventory.json";
inline constexpr const char* kSecretsArtifact = "secrets.json";
inline constexpr const char* kEntryPointsArtifact = "entrypoints.json";
inline constexpr const char* kFindingsArtifact = "findings.json";

struct ExtractOptions {
  std::filesystem::path apk;
  std::vector<std::filesystem::path> traces;
  std::optional<std::filesystem::path> entrypoints_file;
  std::optional<std::filesystem::path> secret_rules_file;
  std::optional<std::filesystem::path> api_def_file;
  SecretDetectOptions secret_options;
};

struct ExtractArtifacts {
  AppInfo app;
  ManifestInfo manifest;
  std::vector<Endpoint> inventory;
  std::vector<ReportSecret> secrets;
  std::vector<EntryPointUse> entry_points;
  std::vector<std::string> local_uris;
  std::vector<std::string> warnings;
};

// Static leg (manifest, DEX strings, entry points, secrets) plus traces.
ExtractArtifacts RunExtract(const ExtractOptions& options);
void WriteExtractArtifacts(const ExtractArtifacts& a, const std::filesystem::path& dir);

// Reads inventory.json, classifies, writes it back.
void RunClassifyStage(const std::filesystem::path& dir, const VendorList& vendors);
// Reads inventory.json, scans, writes findings.json.
ScanResult RunScanStage(const std::filesystem::path& dir, const ScanConfig& cfg,
                        Transport& transport);

struct ReportOptions {
  std::optional<std::string> timestamp;
  std::optional<std::string> owner_contact;
  std::filesystem::path json_out;
  std::filesystem::path markdown_out;
};
// Reads every artifact in dir and writes the JSON and markdown reports.
Report RunReportStage(const std::filesystem::path& dir, const ReportOptions& options);

// Exit codes.
inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitError = 2;

// The androscan command line. transport, when non-null, replaces the
// network transport (tests inject a stub).
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
           Transport* transport = nullptr);

}  // namespace androscan

#endif  // ANDROSCAN_PIPELINE_H_
