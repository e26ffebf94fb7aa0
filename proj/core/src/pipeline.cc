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

#include "androscan/pipeline.h"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <tuple>

#include "androscan/apk.h"
#include "androscan/error.h"
#include "androscan/json_util.h"
#include "androscan/text.h"
#include "androscan/trace.h"
#include "androscan/version.h"

namespace androscan {

namespace fs = std::filesystem;

ExtractArtifacts RunExtract(const ExtractOptions& options) {
  ExtractArtifacts a;
  ApkArchive apk = OpenApk(options.apk);
  a.warnings = apk.warnings();
  a.app.apk_digest = Sha256Hex(apk.bytes());

  a.manifest = DecodeManifest(ReadEntry(apk, apk.manifest_entry().name));
  for (const auto& w : a.manifest.warnings) a.warnings.push_back("manifest: " + w);
  a.app.package_name = a.manifest.package_name;
  a.app.min_sdk = a.manifest.min_sdk;
  a.app.target_sdk = a.manifest.target_sdk;

  EntryPointList eps = options.entrypoints_file
                           ? EntryPointList::Parse(ReadTextFile(*options.entrypoints_file))
                           : EntryPointList::Bundled();
  SecretRules rules = options.secret_rules_file
                          ? SecretRules::Parse(ReadTextFile(*options.secret_rules_file))
                          : SecretRules::Bundled();

  std::vector<std::pair<std::string, DexFile>> dexes;
  for (const ArchiveEntry* entry : apk.dex_entries()) {
    std::vector<uint8_t> bytes = ReadEntry(apk, entry->name);
    try {
      dexes.emplace_back(entry->name, ParseDex(bytes));
    } catch (const Error& e) {
      throw Error(e.code(), entry->name + ": " + e.what());
    }
    for (const auto& w : dexes.back().second.warnings) a.warnings.push_back(entry->name + ": " + w);
  }
  // Classes defined in any DEX of a multi-dex app are app code.
  std::set<std::string> app_classes;
  for (const auto& [name, dex] : dexes) {
    for (const auto& c : dex.classes) app_classes.insert(c.descriptor);
  }

  std::vector<StaticUrl> static_urls;
  std::vector<IndexedString> strings;
  std::set<std::tuple<std::string, std::string, std::string, std::string>> seen_refs;
  for (const auto& [name, dex] : dexes) {
    for (const auto& u : ExtractUrls(dex)) {
      static_urls.push_back({u.url, u.low_confidence});
      if (u.truncated) {
        a.warnings.push_back(name + ": string " + std::to_string(u.string_index) +
                             " exceeds the URL scan cap; only its prefix was scanned");
      }
    }
    for (const auto& u : ExtractLocalUris(dex)) a.local_uris.push_back(u.url);
    for (const auto& ref : FindEntryPointRefs(dex, eps, &app_classes)) {
      if (seen_refs.emplace(ref.entry_point, ref.class_descriptor, ref.method_name,
                            ref.referencing_class)
              .second) {
        a.entry_points.push_back(
            {ref.entry_point, ref.class_descriptor, ref.method_name, ref.referencing_class});
      }
    }
    for (uint32_t i = 0; i < dex.strings.size(); ++i) {
      if (i < dex.string_is_identifier.size() && dex.string_is_identifier[i]) continue;
      strings.push_back({name, i, dex.strings[i]});
    }
  }
  std::sort(a.local_uris.begin(), a.local_uris.end());
  a.local_uris.erase(std::unique(a.local_uris.begin(), a.local_uris.end()), a.local_uris.end());

  for (const auto& c : DetectSecrets(strings, a.manifest.metadata, rules, options.secret_options)) {
    a.secrets.push_back(ToReportSecret(c));
  }

  std::vector<ApiCallTrace> traces;
  for (const auto& path : options.traces) {
    TraceFile tf = ParseTraceFile(path);
    for (const auto& d : tf.diagnostics) a.warnings.push_back(path.filename().string() + ": " + d);
    traces.insert(traces.end(), tf.traces.begin(), tf.traces.end());
  }
  a.inventory = BuildInventory(static_urls, traces);

  if (options.api_def_file) {
    for (Endpoint& d : LoadApiDefinition(ReadTextFile(*options.api_def_file))) {
      auto it = std::find_if(a.inventory.begin(), a.inventory.end(),
                             [&](const Endpoint& e) { return e.Key() == d.Key(); });
      if (it == a.inventory.end()) {
        a.inventory.push_back(std::move(d));
      } else {
        MergeEndpoint(*it, d);
      }
    }
    SortInventory(a.inventory);
  }
  return a;
}

void WriteExtractArtifacts(const ExtractArtifacts& a, const fs::path& dir) {
  fs::create_directories(dir);
  // Metadata values flagged as secrets are masked here too, since the
  // manifest artifact would otherwise carry them in clear.
  ManifestInfo masked = a.manifest;
  for (auto& [key, value] : masked.metadata) {
    for (const auto& s : a.secrets) {
      if (s.source == "manifest-metadata(" + key + ")") value = Redact(value);
    }
  }
  Json manifest = {{"app",
                    {{"package_name", a.app.package_name},
                     {"apk_digest", a.app.apk_digest},
                     {"min_sdk", a.app.min_sdk ? Json(*a.app.min_sdk) : Json(nullptr)},
                     {"target_sdk", a.app.target_sdk ? Json(*a.app.target_sdk) : Json(nullptr)}}},
                   {"manifest", masked},
                   {"local_uris", a.local_uris},
                   {"warnings", a.warnings}};
  WriteTextFile(dir / kManifestArtifact, DumpCanonical(manifest));
  WriteTextFile(dir / kInventoryArtifact, DumpCanonical(Json(a.inventory)));
  WriteTextFile(dir / kSecretsArtifact, DumpCanonical(Json(a.secrets)));
  WriteTextFile(dir / kEntryPointsArtifact, DumpCanonical(Json(a.entry_points)));
  // Findings from an earlier extract would not match this inventory.
  std::error_code ec;
  fs::remove(dir / kFindingsArtifact, ec);
}

namespace {

std::vector<Endpoint> ReadInventory(const fs::path& dir) {
  try {
    return ReadJsonFile(dir / kInventoryArtifact).get<std::vector<Endpoint>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                (dir / kInventoryArtifact).string() + ": " + e.what());
  }
}

}  // namespace

void RunClassifyStage(const fs::path& dir, const VendorList& vendors) {
  std::vector<Endpoint> inventory = ReadInventory(dir);
  ClassifyAll(inventory, vendors);
  WriteTextFile(dir / kInventoryArtifact, DumpCanonical(Json(inventory)));
}

ScanResult RunScanStage(const fs::path& dir, const ScanConfig& cfg, Transport& transport) {
  std::vector<Endpoint> inventory = ReadInventory(dir);
  // Scope decisions need a classification; unclassified inventories get the
  // bundled vendor list in memory so vendor hosts stay out of scope.
  if (std::any_of(inventory.begin(), inventory.end(),
                  [](const Endpoint& e) { return !e.classification.classified; })) {
    VendorList vendors = VendorList::Bundled();
    for (auto& e : inventory) {
      if (!e.classification.classified) e.classification = Classify(e, vendors);
    }
  }
  ScanResult result = Scan(inventory, cfg, transport);
  Json j = {{"findings", result.findings},
            {"notes", result.notes},
            {"endpoints_scanned", result.endpoints_scanned}};
  WriteTextFile(dir / kFindingsArtifact, DumpCanonical(j));
  return result;
}

Report RunReportStage(const fs::path& dir, const ReportOptions& options) {
  ReportInputs in;
  try {
    Json manifest = ReadJsonFile(dir / kManifestArtifact);
    const Json& app = manifest.at("app");
    in.app.package_name = app.value("package_name", "");
    in.app.apk_digest = app.value("apk_digest", "");
    if (app.contains("min_sdk") && !app["min_sdk"].is_null()) in.app.min_sdk = app["min_sdk"].get<int>();
    if (app.contains("target_sdk") && !app["target_sdk"].is_null()) {
      in.app.target_sdk = app["target_sdk"].get<int>();
    }
    in.permissions = manifest.at("manifest").get<ManifestInfo>().permissions;
    in.inventory = ReadInventory(dir);
    in.secrets = ReadJsonFile(dir / kSecretsArtifact).get<std::vector<ReportSecret>>();
    in.entry_points = ReadJsonFile(dir / kEntryPointsArtifact).get<std::vector<EntryPointUse>>();
    if (fs::exists(dir / kFindingsArtifact)) {
      Json f = ReadJsonFile(dir / kFindingsArtifact);
      in.findings = f.at("findings").get<std::vector<Finding>>();
      in.notes = f.value("notes", std::vector<ScanNote>{});
    } else {
      in.notes.push_back({"", "no scan results; run the scan stage to probe endpoints"});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, "artifact in " + dir.string() + ": " + e.what());
  }
  in.generated_at = options.timestamp ? *options.timestamp : UtcNowIso8601();
  in.owner_contact = options.owner_contact;
  Report r = AssembleReport(std::move(in));
  WriteTextFile(options.json_out, RenderJson(r));
  WriteTextFile(options.markdown_out, RenderMarkdown(r));
  return r;
}

namespace {

struct CliState {
  std::string out_dir = "androscan-out";
  uint64_t seed = 0;
  bool verbose = false;

  std::string apk;
  std::vector<std::string> traces;
  std::string entrypoints, secret_rules, api_def, ext_libs;

  ScanConfig scan;
  std::string scope = "internal-only";
  std::string fail_on = "High";
  std::vector<std::string> connect_to;
  std::string record, replay;
  bool insecure = false;

  std::string json_out, md_out, timestamp, owner_contact;
};

bool FailsThreshold(const std::vector<Finding>& findings, Severity threshold) {
  // Severity enumerators run High < Medium < Low.
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.severity <= threshold; });
}

void AddExtractOptions(CLI::App* cmd, CliState& s) {
  cmd->add_option("apk", s.apk, "APK file to analyze")->required();
  cmd->add_option("--traces", s.traces, "NDJSON runtime trace file (repeatable)");
  cmd->add_option("--entrypoints", s.entrypoints,
                  "Networking entry-point class list (default: bundled)");
  cmd->add_option("--secret-rules", s.secret_rules, "Secret pattern rules TSV (default: bundled)");
  cmd->add_option("--api-def", s.api_def, "API definition JSON merged into the inventory");
}

void AddClassifyOptions(CLI::App* cmd, CliState& s) {
  cmd->add_option("--ext-libs", s.ext_libs, "Third-party vendor list (default: bundled)");
}

void AddScanOptions(CLI::App* cmd, CliState& s) {
  cmd->add_flag("--active", s.scan.active, "Send network probes (off by default)");
  cmd->add_option("--scope", s.scope, "Endpoints to probe")
      ->check(CLI::IsMember({"internal-only", "all"}))
      ->capture_default_str();
  cmd->add_option("--timeout-ms", s.scan.timeout_ms, "Per-request timeout")->capture_default_str();
  cmd->add_option("--concurrency", s.scan.max_concurrency, "Maximum requests in flight")
      ->capture_default_str();
  cmd->add_option("--rps", s.scan.requests_per_second_cap, "Global request rate cap")
      ->capture_default_str();
  cmd->add_option("--iterations", s.scan.fuzz_iterations_per_param,
                  "Fuzz mutations per parameter")
      ->capture_default_str();
  cmd->add_option("--fail-on", s.fail_on, "Exit 1 when a finding is at or above this severity")
      ->check(CLI::IsMember({"high", "medium", "low"}, CLI::ignore_case))
      ->capture_default_str();
  cmd->add_option("--connect-to", s.connect_to,
                  "HOST[:PORT]=[http://]ADDR:PORT remap; HOST may be '*' (repeatable)");
  cmd->add_option("--record", s.record, "Write every response to this tape file");
  cmd->add_option("--replay", s.replay, "Serve responses from a tape instead of the network");
  cmd->add_flag("--insecure", s.insecure, "Do not verify TLS certificates");
}

void AddReportOptions(CLI::App* cmd, CliState& s) {
  cmd->add_option("--json", s.json_out, "Report JSON path (default: <out>/report.json)");
  cmd->add_option("--out-md", s.md_out, "Report markdown path (default: <out>/report.md)");
  cmd->add_option("--timestamp", s.timestamp, "Fixed generated_at value (default: now, UTC)");
  cmd->add_option("--owner-contact", s.owner_contact, "Contact recorded in the report");
}

void PrintWarnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

int DoExtract(const CliState& s, std::ostream& out, std::ostream& err) {
  ExtractOptions o;
  o.apk = s.apk;
  for (const auto& t : s.traces) o.traces.push_back(t);
  if (!s.entrypoints.empty()) o.entrypoints_file = s.entrypoints;
  if (!s.secret_rules.empty()) o.secret_rules_file = s.secret_rules;
  if (!s.api_def.empty()) o.api_def_file = s.api_def;
  ExtractArtifacts a = RunExtract(o);
  WriteExtractArtifacts(a, s.out_dir);
  PrintWarnings(a.warnings, err);
  if (s.verbose) {
    out << "extract: " << a.inventory.size() << " endpoints, " << a.secrets.size()
        << " secret candidates, " << a.entry_points.size() << " entry-point references\n";
  }
  return kExitClean;
}

int DoClassify(const CliState& s, std::ostream& out) {
  VendorList vendors =
      s.ext_libs.empty() ? VendorList::Bundled() : VendorList::Parse(ReadTextFile(s.ext_libs));
  RunClassifyStage(s.out_dir, vendors);
  if (s.verbose) out << "classify: " << (fs::path(s.out_dir) / kInventoryArtifact).string() << "\n";
  return kExitClean;
}

int DoScan(const CliState& s, std::ostream& out, Transport* injected) {
  ScanConfig cfg = s.scan;
  cfg.seed = s.seed;
  cfg.scope = s.scope == "all" ? ScopeFilter::kAll : ScopeFilter::kInternalOnly;
  cfg.Validate();

  std::unique_ptr<Transport> owned;
  Transport* base = injected;
  if (!base) {
    if (!s.replay.empty()) {
      owned = std::make_unique<ReplayTransport>(ReplayTransport::Load(s.replay));
    } else {
      HttpTransportOptions ho;
      ho.timeout_ms = cfg.timeout_ms;
      ho.verify_tls = !s.insecure;
      for (const auto& c : s.connect_to) ho.connect_to.push_back(ParseConnectTo(c));
      owned = std::make_unique<HttpTransport>(std::move(ho));
    }
    base = owned.get();
  }
  std::unique_ptr<TapeRecorder> recorder;
  if (!s.record.empty()) recorder = std::make_unique<TapeRecorder>(*base);
  ScanResult r = RunScanStage(s.out_dir, cfg, recorder ? *recorder : *base);
  if (recorder) recorder->Save(s.record);
  if (s.verbose) {
    out << "scan: " << r.endpoints_scanned << " endpoints, " << r.probes_sent << " requests, "
        << r.findings.size() << " findings\n";
  }
  return FailsThreshold(r.findings, ParseSeverity(s.fail_on)) ? kExitFindings : kExitClean;
}

int DoReport(const CliState& s, std::ostream& out) {
  ReportOptions o;
  o.json_out = s.json_out.empty() ? fs::path(s.out_dir) / "report.json" : fs::path(s.json_out);
  o.markdown_out = s.md_out.empty() ? fs::path(s.out_dir) / "report.md" : fs::path(s.md_out);
  if (!s.timestamp.empty()) o.timestamp = s.timestamp;
  if (!s.owner_contact.empty()) o.owner_contact = s.owner_contact;
  Report r = RunReportStage(s.out_dir, o);
  if (s.verbose) {
    out << "report: " << o.json_out.string() << ", " << o.markdown_out.string() << " ("
        << r.stats.total_apis << " APIs, " << r.stats.vulnerabilities << " vulnerabilities)\n";
  }
  return kExitClean;
}

// Runs one stage and prefixes its errors with the stage name.
template <typename F>
int Stage(const char* name, std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    err << "androscan: " << name << ": " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "androscan: " << name << ": " << ErrorCodeName(ErrorCode::kIoError) << ": " << e.what()
        << "\n";
  }
  return -1;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
           Transport* transport) {
  CliState s;
  CLI::App app{"Android APK backend-API extractor and vulnerability scanner", "androscan"};
  app.set_version_flag("--version", std::string(Version()));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--out", s.out_dir, "Work directory for artifacts")->capture_default_str();
  app.add_option("--seed", s.seed, "Seed for fuzz payload selection")->capture_default_str();
  app.add_flag("-v,--verbose", s.verbose, "Print stage summaries");

  CLI::App* extract = app.add_subcommand("extract", "Extract manifest, endpoints, secrets");
  AddExtractOptions(extract, s);
  CLI::App* classify = app.add_subcommand("classify", "Label endpoints internal or external");
  AddClassifyOptions(classify, s);
  CLI::App* scan = app.add_subcommand("scan", "Probe inventory endpoints");
  AddScanOptions(scan, s);
  CLI::App* report = app.add_subcommand("report", "Write the JSON and markdown reports");
  AddReportOptions(report, s);
  CLI::App* full = app.add_subcommand("full", "extract, classify, scan and report in one run");
  AddExtractOptions(full, s);
  AddClassifyOptions(full, s);
  AddScanOptions(full, s);
  AddReportOptions(full, s);

  // CLI11 prints help and parse errors itself; route them to our streams.
  std::ostringstream cli_out, cli_err;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? kExitClean : kExitError;
  }

  int rc = -1;
  if (*extract) {
    rc = Stage("extract", err, [&] { return DoExtract(s, out, err); });
  } else if (*classify) {
    rc = Stage("classify", err, [&] { return DoClassify(s, out); });
  } else if (*scan) {
    rc = Stage("scan", err, [&] { return DoScan(s, out, transport); });
  } else if (*report) {
    rc = Stage("report", err, [&] { return DoReport(s, out); });
  } else if (*full) {
    rc = Stage("extract", err, [&] { return DoExtract(s, out, err); });
    if (rc == kExitClean) rc = Stage("classify", err, [&] { return DoClassify(s, out); });
    int scan_rc = rc == kExitClean ? Stage("scan", err, [&] { return DoScan(s, out, transport); }) : rc;
    rc = scan_rc < 0 ? scan_rc : Stage("report", err, [&] { return DoReport(s, out); });
    if (rc == kExitClean) rc = scan_rc;
  }
  return rc < 0 ? kExitError : rc;
}

}  // namespace androscan
