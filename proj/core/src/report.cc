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

#include "androscan/report.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "androscan/error.h"
#include "androscan/json_util.h"
#include "androscan/text.h"
#include "androscan/version.h"

namespace androscan {

namespace {

// Parameter names whose example values are credentials or session state.
bool IsSensitiveParamName(std::string_view name) {
  std::string n = StripPunctuation(name);
  for (const char* w : {"password", "passwd", "pwd", "token", "secret", "auth", "cookie",
                        "session", "apikey", "accesskey", "privatekey", "otp", "pin"}) {
    if (n.find(w) != std::string::npos) return true;
  }
  return false;
}

std::string Cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

const char* CheckTitle(std::string_view id) {
  if (id == "HDR_XSS_PROTECTION_MISSING") return "Missing X-XSS-Protection header";
  if (id == "HDR_CONTENT_TYPE_OPTIONS_MISSING") return "Missing X-Content-Type-Options header";
  if (id == "HDR_FRAME_OPTIONS_MISSING") return "Missing X-Frame-Options header";
  if (id == "HDR_HSTS_MISSING") return "Missing Strict-Transport-Security header";
  if (id == "HDR_CSP_MISSING") return "Missing Content-Security-Policy header";
  if (id == "METHOD_UNEXPECTED_ALLOWED") return "Unexpected HTTP method accepted";
  if (id == "FUZZ_SERVER_ERROR") return "Server error on malformed input";
  if (id == "FUZZ_REFLECTION") return "Unencoded input reflection";
  if (id == "EXCESSIVE_DATA_EXPOSURE") return "Excessive data exposure";
  return "Finding";
}

bool FindingOrder(const Finding& a, const Finding& b) {
  return std::tie(a.severity, a.endpoint) < std::tie(b.severity, b.endpoint);
}

}  // namespace

ReportSecret ToReportSecret(const SecretCandidate& c) {
  return {Redact(c.value), c.source.ToString(), c.detector, c.entropy_bits_per_char, c.confidence};
}

ReportStats ComputeStats(const std::vector<Endpoint>& endpoints,
                         const std::vector<Finding>& findings) {
  ReportStats s;
  s.total_apis = static_cast<int>(endpoints.size());
  for (const auto& e : endpoints) s.external_apis += e.classification.external ? 1 : 0;
  s.internal_apis = s.total_apis - s.external_apis;
  std::set<std::string> kinds;
  for (const auto& f : findings) kinds.insert(f.check_id);
  s.vulnerabilities = static_cast<int>(kinds.size());
  return s;
}

Report AssembleReport(ReportInputs in) {
  Report r;
  r.tool_version = Version();
  r.app = std::move(in.app);
  r.generated_at = std::move(in.generated_at);
  r.permissions = std::move(in.permissions);
  std::sort(r.permissions.begin(), r.permissions.end());
  r.permissions.erase(std::unique(r.permissions.begin(), r.permissions.end()), r.permissions.end());

  r.endpoints = std::move(in.inventory);
  SortInventory(r.endpoints);
  for (auto& e : r.endpoints) {
    for (auto& p : e.params) {
      if (p.encrypted_suspect) {
        r.encrypted_params.push_back(
            {e.Key(), std::string(ParamLocationName(p.location)) + ":" + p.name,
             p.entropy_bits_per_char});
      }
      if (p.encrypted_suspect || IsSensitiveParamName(p.name)) p.example = Redact(p.example);
    }
  }
  r.secrets = std::move(in.secrets);
  r.entry_points = std::move(in.entry_points);
  std::sort(r.entry_points.begin(), r.entry_points.end(), [](const auto& a, const auto& b) {
    return std::tie(a.entry_point, a.class_descriptor, a.method_name, a.referencing_class) <
           std::tie(b.entry_point, b.class_descriptor, b.method_name, b.referencing_class);
  });
  r.findings = std::move(in.findings);
  SortFindings(r.findings);
  r.notes = std::move(in.notes);
  r.stats = ComputeStats(r.endpoints, r.findings);
  r.owner_contact = std::move(in.owner_contact);
  ValidateReport(r);
  return r;
}

void ValidateReport(const Report& r) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "report invariant violated: " + what);
  };
  if (r.stats.total_apis != r.stats.external_apis + r.stats.internal_apis) {
    fail("total_apis != external_apis + internal_apis");
  }
  if (!(r.stats == ComputeStats(r.endpoints, r.findings))) fail("stats do not match the arrays");
  if (!std::is_sorted(r.findings.begin(), r.findings.end(), FindingOrder)) {
    fail("findings not sorted by severity then endpoint");
  }
  for (const auto& f : r.findings) {
    if (!(f.confidence >= 0 && f.confidence <= 1)) fail("confidence outside [0,1]");
    for (const auto& c : AllChecks()) {
      if (f.check_id == c.check_id && f.severity != c.severity) {
        fail("severity of " + f.check_id + " differs from the check table");
      }
    }
  }
}

std::string RenderJson(const Report& r) { return DumpCanonical(Json(r)); }

Report ParseReportJson(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "report is not a JSON object");
  }
  try {
    return j.get<Report>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("report: ") + e.what());
  }
}

std::string RenderMarkdown(const Report& r) {
  std::ostringstream md;
  md << "# androscan report: " << (r.app.package_name.empty() ? "(unknown package)" : r.app.package_name)
     << "\n\n";
  md << "- Tool version: " << r.tool_version << "\n";
  md << "- Generated: " << r.generated_at << "\n";
  if (!r.app.apk_digest.empty()) md << "- APK SHA-256: `" << r.app.apk_digest << "`\n";
  if (r.app.min_sdk || r.app.target_sdk) {
    md << "- SDK: min " << (r.app.min_sdk ? std::to_string(*r.app.min_sdk) : "?") << ", target "
       << (r.app.target_sdk ? std::to_string(*r.app.target_sdk) : "?") << "\n";
  }
  if (r.owner_contact) md << "- Owner contact: " << *r.owner_contact << "\n";
  md << "\n## Summary\n\n| Metric | Value |\n|---|---|\n";
  md << "| Total APIs | " << r.stats.total_apis << " |\n";
  md << "| External APIs | " << r.stats.external_apis << " |\n";
  md << "| Internal APIs | " << r.stats.internal_apis << " |\n";
  md << "| Vulnerabilities | " << r.stats.vulnerabilities << " |\n";
  md << "| Findings | " << r.findings.size() << " |\n";

  if (!r.endpoints.empty()) {
    md << "\n## Endpoints\n";
    for (bool external : {false, true}) {
      md << "\n### " << (external ? "External" : "Internal") << "\n\n";
      md << "| Endpoint | Methods | Origin |" << (external ? " Vendor |" : "") << "\n";
      md << "|---|---|---|" << (external ? "---|" : "") << "\n";
      size_t rows = 0;
      for (const auto& e : r.endpoints) {
        if (e.classification.external != external) continue;
        ++rows;
        std::string methods;
        for (const auto& m : e.methods) methods += (methods.empty() ? "" : ", ") + m;
        md << "| `" << Cell(e.Key()) << "` | " << (methods.empty() ? "-" : methods) << " | "
           << OriginName(e.origin) << (e.low_confidence ? " (low confidence)" : "") << " |";
        if (external) md << " " << Cell(e.classification.vendor) << " |";
        md << "\n";
      }
      if (!rows) md << "| (none) | | |" << (external ? " |" : "") << "\n";
    }
  }

  if (!r.findings.empty()) {
    md << "\n## Findings\n";
    for (Severity sev : {Severity::kHigh, Severity::kMedium, Severity::kLow}) {
      bool header = false;
      for (const auto& f : r.findings) {
        if (f.severity != sev) continue;
        if (!header) {
          md << "\n### " << SeverityName(sev) << "\n";
          header = true;
        }
        md << "\n#### " << CheckTitle(f.check_id) << " (`" << f.check_id << "`)\n\n";
        md << "- Endpoint: `" << f.endpoint << "`\n";
        if (!f.method.empty()) md << "- Method: " << f.method << "\n";
        if (!f.parameter.empty()) md << "- Parameter: `" << f.parameter << "`\n";
        md << "- OWASP: " << f.owasp_category << "\n";
        md << "- Confidence: " << Fixed(f.confidence, 3) << "\n";
        md << "- Evidence: " << Cell(f.evidence) << "\n";
        md << "- Remediation: " << Cell(f.remediation) << "\n";
      }
    }
  }

  if (!r.secrets.empty()) {
    md << "\n## Secrets\n\n| Value (redacted) | Source | Detector | Entropy | Confidence |\n"
          "|---|---|---|---|---|\n";
    for (const auto& s : r.secrets) {
      md << "| `" << Cell(s.value) << "` | " << Cell(s.source) << " | " << Cell(s.detector)
         << " | " << Fixed(s.entropy_bits_per_char, 2) << " | " << Fixed(s.confidence, 2)
         << " |\n";
    }
    md << "\nManifest values given as resource references (`@0x...`) are not resolved, since "
          "resources.arsc is not decoded.\n";
  }

  if (!r.entry_points.empty()) {
    md << "\n## Network entry points\n\n| Entry point | Method | Referenced from |\n|---|---|---|\n";
    for (const auto& u : r.entry_points) {
      md << "| " << Cell(u.entry_point) << " | " << Cell(u.method_name) << " | `"
         << Cell(u.referencing_class) << "` |\n";
    }
  }

  if (!r.permissions.empty()) {
    md << "\n## Permissions\n\n";
    for (const auto& p : r.permissions) md << "- " << p << "\n";
  }

  if (!r.notes.empty()) {
    md << "\n## Scan notes\n\n";
    for (const auto& n : r.notes) {
      md << "- " << (n.endpoint.empty() ? "" : "`" + n.endpoint + "`: ") << Cell(n.message) << "\n";
    }
  }

  if (!r.encrypted_params.empty()) {
    md << "\n## Appendix: encrypted-looking parameters\n\n"
          "These values were not fuzzed.\n\n| Endpoint | Parameter | Entropy (bits/char) |\n"
          "|---|---|---|\n";
    for (const auto& p : r.encrypted_params) {
      md << "| `" << Cell(p.endpoint) << "` | `" << Cell(p.param_path) << "` | "
         << Fixed(p.entropy_bits_per_char, 2) << " |\n";
    }
  }
  return md.str();
}

std::string Sha256Hex(const std::vector<uint8_t>& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "SHA-256 failed");
  }
  return HexEncode(digest, len);
}

}  // namespace androscan
