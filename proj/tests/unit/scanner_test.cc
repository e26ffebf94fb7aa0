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

#include <gtest/gtest.h>

#include <chrono>

#include <nlohmann/json.hpp>

#include "androscan/error.h"
#include "androscan/scanner.h"
#include "common/support.h"

namespace androscan {
namespace {

Endpoint MakeEndpoint(const std::string& url, std::vector<std::string> methods = {}) {
  auto inv = BuildInventory({{url, false}}, {});
  Endpoint e = inv.at(0);
  for (auto& m : methods) AddMethod(e.methods, m);
  e.classification = {true, false, ""};
  return e;
}

HttpResponse Json200(const std::string& body) {
  HttpResponse r;
  r.status = 200;
  r.headers = {{"Content-Type", "application/json"}};
  r.body = body;
  return r;
}

ScanConfig FastConfig() {
  ScanConfig cfg;
  cfg.active = true;
  cfg.seed = 42;
  cfg.requests_per_second_cap = 1000;
  cfg.timeout_ms = 3000;
  return cfg;
}

TEST(ScanConfigTest, Validation) {
  ScanConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  for (int field = 0; field < 4; ++field) {
    ScanConfig bad;
    if (field == 0) bad.timeout_ms = 0;
    if (field == 1) bad.max_concurrency = -1;
    if (field == 2) bad.requests_per_second_cap = 0;
    if (field == 3) bad.fuzz_iterations_per_param = 0;
    EXPECT_THROW(bad.Validate(), Error) << field;
  }
  EXPECT_EQ(ParseSeverity("medium"), Severity::kMedium);
  EXPECT_THROW(ParseSeverity("critical"), Error);
}

TEST(CheckTableTest, FixedMapping) {
  EXPECT_EQ(LookupCheck("EXCESSIVE_DATA_EXPOSURE").severity, Severity::kHigh);
  EXPECT_EQ(LookupCheck("EXCESSIVE_DATA_EXPOSURE").owasp_api_rank, 3);
  EXPECT_EQ(LookupCheck("METHOD_UNEXPECTED_ALLOWED").owasp_api_rank, 5);
  EXPECT_EQ(LookupCheck("FUZZ_REFLECTION").owasp_api_rank, 8);
  EXPECT_EQ(LookupCheck("HDR_HSTS_MISSING").severity, Severity::kLow);
  EXPECT_EQ(AllChecks().size(), 9u);
  for (const auto& c : AllChecks()) {
    EXPECT_NE(std::string(c.owasp_category).find("API" + std::to_string(c.owasp_api_rank) + ":2019"),
              std::string::npos)
        << c.check_id;
    EXPECT_GT(std::string(c.remediation).size(), 10u);
  }
}

TEST(ConfidenceTest, Aggregation) {
  EXPECT_DOUBLE_EQ(AggregateConfidence(8, 8), 1.0);
  EXPECT_DOUBLE_EQ(AggregateConfidence(2, 8), 0.25);
  EXPECT_DOUBLE_EQ(AggregateConfidence(0, 8), 0.0);
  EXPECT_DOUBLE_EQ(AggregateConfidence(9, 8), 1.0);
  EXPECT_DOUBLE_EQ(AggregateConfidence(1, 0), 0.0);
}

TEST(FuzzScheduleTest, DeterministicAndCoversEveryClass) {
  ParamDescriptor p{"newpassword", ParamLocation::kBody, "x", false, 0};
  auto a = FuzzSchedule(42, "http://h.example.com/x", p, 8);
  EXPECT_EQ(a, FuzzSchedule(42, "http://h.example.com/x", p, 8));
  ASSERT_EQ(a.size(), 8u);
  std::set<PayloadClass> first6;
  for (int i = 0; i < 6; ++i) first6.insert(a[i].first);
  EXPECT_EQ(first6.size(), 6u);
  int differ = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    differ += FuzzSchedule(seed, "http://h.example.com/x", p, 8) != a ? 1 : 0;
  }
  EXPECT_GE(differ, 15);
  ParamDescriptor q = p;
  q.location = ParamLocation::kQuery;
  (void)FuzzSchedule(42, "http://h.example.com/x", q, 3);
  EXPECT_EQ(FuzzSchedule(42, "http://h.example.com/x", q, 3).size(), 3u);
  for (const auto& [cls, value] : a) {
    switch (cls) {
      case PayloadClass::kOversized: EXPECT_EQ(value, std::string(4096, 'A')); break;
      case PayloadClass::kEmpty: EXPECT_EQ(value, ""); break;
      case PayloadClass::kNullLiteral: EXPECT_EQ(value, "null"); break;
      default: EXPECT_FALSE(value.empty());
    }
  }
}

TEST(PlanTest, BaselineMethodsThenFuzz) {
  auto inv = testing::FixtureInventory("bank");
  ScanConfig cfg = FastConfig();
  for (const auto& e : inv) {
    if (e.classification.external) continue;
    auto plan = PlanProbes(e, cfg);
    ASSERT_GE(plan.size(), 8u);
    EXPECT_EQ(plan[0].kind, ProbeKind::kBaseline);
    EXPECT_EQ(plan[0].method, "POST");
    for (int i = 1; i <= 7; ++i) {
      EXPECT_EQ(plan[i].kind, ProbeKind::kMethod);
      EXPECT_EQ(plan[i].method, CanonicalMethods()[i - 1]);
    }
    size_t fuzzable = 0;
    for (const auto& p : e.params) fuzzable += p.encrypted_suspect ? 0 : 1;
    EXPECT_EQ(plan.size(), 8 + fuzzable * 8) << e.Key();
    for (size_t i = 0; i < plan.size(); ++i) EXPECT_EQ(plan[i].index, static_cast<int>(i));
  }
}

TEST(PlanTest, EncryptedParamsAreNotFuzzed) {
  auto inv = testing::FixtureInventory("hirect");
  ScanConfig cfg = FastConfig();
  for (const auto& e : inv) {
    for (const auto& p : PlanProbes(e, cfg)) {
      if (p.kind != ProbeKind::kFuzz) continue;
      EXPECT_NE(p.param, "header:X-Auth-Token");
      EXPECT_NE(p.param, "body:payload");
    }
  }
}

TEST(BuildRequestTest, BodiesAndOverrides) {
  Endpoint e = MakeEndpoint("https://api.example.com/u/{id}?q=1", {"POST"});
  e.params.push_back({"name", ParamLocation::kBody, "bob", false, 0});
  e.params.push_back({"user.age", ParamLocation::kBody, "30", false, 0});
  e.params.push_back({"X-Trace", ParamLocation::kHeader, "t", false, 0});
  e.body_encoding = BodyEncoding::kJson;
  const ParamDescriptor* name = e.FindParam("name", ParamLocation::kBody);
  auto r = BuildRequest(e, "POST", true, name, "", true);
  EXPECT_EQ(r.url.path, "/u/1");
  EXPECT_EQ(r.url.query, "q=1");
  auto body = nlohmann::json::parse(r.body);
  EXPECT_TRUE(body["name"].is_null());
  EXPECT_EQ(body["user"]["age"], "30");
  bool trace = false;
  for (const auto& h : r.headers) trace |= h.key == "X-Trace" && h.value == "t";
  EXPECT_TRUE(trace);

  e.body_encoding = BodyEncoding::kForm;
  r = BuildRequest(e, "POST", true, name, "a&b");
  EXPECT_NE(r.body.find("name=a%26b"), std::string::npos);
  r = BuildRequest(e, "DELETE", false);
  EXPECT_TRUE(r.body.empty());
  EXPECT_EQ(r.url.path, "/u/1");
}

TEST(HeaderCheckTest, MissingHeadersOnly) {
  Endpoint e = MakeEndpoint("https://api.example.com/x");
  HttpResponse r = Json200("{}");
  auto all = CheckSecurityHeaders(e, r, 0);
  EXPECT_EQ(all.size(), 5u);
  r.headers.push_back({"x-xss-protection", "1"});
  r.headers.push_back({"Strict-Transport-Security", "max-age=1"});
  auto some = CheckSecurityHeaders(e, r, 0);
  EXPECT_EQ(some.size(), 3u);
  Endpoint plain = MakeEndpoint("http://api.example.com/x");
  EXPECT_EQ(CheckSecurityHeaders(plain, Json200("{}"), 0).size(), 4u);
  HttpResponse err;
  err.transport_error = "refused";
  EXPECT_TRUE(CheckSecurityHeaders(e, err, 0).empty());
}

TEST(MethodAnalysisTest, FlagsUnexpected2xx) {
  Endpoint e = MakeEndpoint("http://api.example.com/x", {"POST"});
  auto plan = PlanProbes(e, FastConfig());
  std::vector<HttpResponse> res(plan.size());
  for (size_t i = 0; i < plan.size(); ++i) res[i].status = 405;
  res[0].status = 200;
  res[2].status = 200;  // POST, expected
  res[4].status = 204;  // DELETE
  res[7].status = 302;  // OPTIONS, not 2xx
  auto f = AnalyzeMethods(e, plan, res);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].method, "DELETE");
  EXPECT_EQ(f[0].probe_index, 4);
  EXPECT_EQ(f[0].severity, Severity::kMedium);

  Endpoint get_only = MakeEndpoint("http://api.example.com/g");
  EXPECT_EQ(ExpectedMethods(get_only), (std::vector<std::string>{"GET", "HEAD"}));
}

TEST(FuzzAnalysisTest, ConfidenceSuppressionAndReflection) {
  Endpoint e = MakeEndpoint("http://api.example.com/x", {"POST"});
  e.params.push_back({"a", ParamLocation::kBody, "1", false, 0});
  ScanConfig cfg = FastConfig();
  auto plan = PlanProbes(e, cfg);
  std::vector<HttpResponse> res(plan.size(), Json200("{}"));
  int fives = 0;
  for (size_t i = 8; i < plan.size(); ++i) {
    if (plan[i].payload_class == PayloadClass::kOversized ||
        plan[i].payload_class == PayloadClass::kExtremeInteger) {
      res[i].status = 500;
      ++fives;
    }
    if (plan[i].payload_class == PayloadClass::kMetacharacters) res[i].body = plan[i].payload;
  }
  auto f = AnalyzeFuzz(e, plan, res, 8);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].check_id, "FUZZ_SERVER_ERROR");
  EXPECT_DOUBLE_EQ(f[0].confidence, fives / 8.0);
  EXPECT_EQ(f[0].parameter, "body:a");
  EXPECT_EQ(f[1].check_id, "FUZZ_REFLECTION");

  res.assign(plan.size(), Json200("{}"));
  EXPECT_TRUE(AnalyzeFuzz(e, plan, res, 8).empty());

  // A failing baseline says nothing about the fuzzed inputs.
  res.assign(plan.size(), Json200("{}"));
  for (auto& r : res) r.status = 503;
  EXPECT_TRUE(AnalyzeFuzz(e, plan, res, 8).empty());
}

TEST(ExposureTest, SensitiveClasses) {
  Endpoint e = MakeEndpoint("https://api.example.com/me");
  e.params.push_back({"email", ParamLocation::kQuery, "", false, 0});
  std::string note;
  auto f = DetectExcessiveDataExposure(
      e,
      Json200(R"({"id":7,"email":"sent@example.com","owner":{"mail":"o@example.com",)"
              R"("created":"2022-11-01T10:00:00Z"},"items":[{"ts":1667293200}],)"
              R"("mobile":"9876543210","count":1667293200,"password_hash":"x",)"
              R"("loc":{"lat":12.9,"lng":77.6}})"),
      0, &note);
  EXPECT_TRUE(note.empty());
  ASSERT_EQ(f.size(), 1u);
  const std::string& ev = f[0].evidence;
  EXPECT_NE(ev.find("owner.mail (email)"), std::string::npos) << ev;
  EXPECT_NE(ev.find("owner.created (timestamp)"), std::string::npos) << ev;
  EXPECT_NE(ev.find("items[].ts (timestamp)"), std::string::npos) << ev;
  EXPECT_NE(ev.find("mobile (phone)"), std::string::npos) << ev;
  EXPECT_NE(ev.find("password_hash"), std::string::npos) << ev;
  EXPECT_NE(ev.find("loc"), std::string::npos) << ev;
  EXPECT_EQ(ev.find("sent@example.com"), std::string::npos);
  EXPECT_EQ(ev.find(" email ("), std::string::npos) << "request param echoed back is excluded";
  EXPECT_EQ(f[0].severity, Severity::kHigh);

  EXPECT_TRUE(DetectExcessiveDataExposure(e, Json200(R"({"id":1,"name":"x"})"), 0, &note).empty());
}

TEST(ExposureTest, NotesForUnanalyzableBodies) {
  Endpoint e = MakeEndpoint("https://api.example.com/me");
  std::string note;
  EXPECT_TRUE(DetectExcessiveDataExposure(e, Json200("<html>"), 0, &note).empty());
  EXPECT_EQ(note.rfind("UnparseableBody", 0), 0u) << note;
  HttpResponse r = Json200(R"({"email":"a@b.example.com"})");
  r.status = 404;
  note.clear();
  EXPECT_TRUE(DetectExcessiveDataExposure(e, r, 0, &note).empty());
  EXPECT_FALSE(note.empty());
}

TEST(RateLimiterTest, SpacesGrants) {
  RateLimiter limiter(50);
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 11; ++i) limiter.Acquire();
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  EXPECT_GE(ms.count(), 195);
  EXPECT_LT(ms.count(), 1000);
}

TEST(ScanTest, PassiveByDefault) {
  auto inv = testing::FixtureInventory("bank");
  RecordingTransport t;
  ScanConfig cfg;
  auto r = Scan(inv, cfg, t);
  EXPECT_EQ(t.attempts(), 0u);
  EXPECT_TRUE(r.findings.empty());
  ASSERT_EQ(r.notes.size(), 1u);
  EXPECT_EQ(r.probes_sent, 0u);
}

TEST(ScanTest, ScopeFilter) {
  if (NetworkForcedOff()) GTEST_SKIP() << "network forced off";
  auto inv = testing::FixtureInventory("bank");
  RecordingTransport t;
  ScanConfig cfg = FastConfig();
  auto internal = Scan(inv, cfg, t);
  EXPECT_EQ(internal.endpoints_scanned, 3u);
  size_t sent = t.attempts();
  EXPECT_EQ(internal.probes_sent, sent);
  for (const auto& req : t.requests()) EXPECT_EQ(req.url.host, "insecurebankv2.local");
  cfg.scope = ScopeFilter::kAll;
  RecordingTransport t2;
  EXPECT_EQ(Scan(inv, cfg, t2).endpoints_scanned, 4u);
  EXPECT_GT(t2.attempts(), sent);
}

struct Key {
  std::string check_id, endpoint, method, parameter;
  bool operator==(const Key&) const = default;
  bool operator<(const Key& o) const {
    return std::tie(check_id, endpoint, method, parameter) <
           std::tie(o.check_id, o.endpoint, o.method, o.parameter);
  }
};

TEST(ScanTest, BankAgainstMock) {
  if (NetworkForcedOff()) GTEST_SKIP() << "network forced off";
  testing::RunningMock mock("bank");
  HttpTransport t(mock.transport_options());
  auto r = Scan(testing::FixtureInventory("bank"), FastConfig(), t);
  std::set<Key> got;
  for (const auto& f : r.findings) got.insert({f.check_id, f.endpoint, f.method, f.parameter});
  const std::string base = "http://insecurebankv2.local:8888";
  std::set<Key> want;
  for (const char* path : {"/login", "/dotransfer", "/changepassword"}) {
    want.insert({"HDR_XSS_PROTECTION_MISSING", base + path, "POST", ""});
    want.insert({"HDR_CONTENT_TYPE_OPTIONS_MISSING", base + path, "POST", ""});
  }
  want.insert({"METHOD_UNEXPECTED_ALLOWED", base + "/changepassword", "GET", ""});
  want.insert({"METHOD_UNEXPECTED_ALLOWED", base + "/changepassword", "HEAD", ""});
  want.insert({"FUZZ_SERVER_ERROR", base + "/changepassword", "POST", "body:newpassword"});
  EXPECT_EQ(got, want);
  EXPECT_EQ(r.findings.size(), 9u);
  for (const auto& f : r.findings) {
    if (f.check_id == "FUZZ_SERVER_ERROR") EXPECT_DOUBLE_EQ(f.confidence, 0.125);
  }
  EXPECT_EQ(r.probes_sent, mock.server().Log().size());
}

TEST(ScanTest, HirectExposure) {
  if (NetworkForcedOff()) GTEST_SKIP() << "network forced off";
  testing::RunningMock mock("hirect");
  HttpTransport t(mock.transport_options());
  auto r = Scan(testing::FixtureInventory("hirect"), FastConfig(), t);
  std::vector<Finding> ede;
  for (const auto& f : r.findings) {
    if (f.check_id == "EXCESSIVE_DATA_EXPOSURE") ede.push_back(f);
  }
  ASSERT_EQ(ede.size(), 1u);
  EXPECT_EQ(ede[0].endpoint, "https://seekermsg.hirectapp.com/msg");
  EXPECT_NE(ede[0].evidence.find("msgs[].sent_at (timestamp)"), std::string::npos);
  EXPECT_EQ(r.endpoints_scanned, 16u);
}

TEST(ScanTest, RedirectsStayOnHost) {
  if (NetworkForcedOff()) GTEST_SKIP() << "network forced off";
  testing::RunningMock mock(MockProfile::Parse(R"({"name":"r","flaws":[],"routes":[
      {"method":"GET","path":"/a","status":302,"headers":{"Location":"/b"}},
      {"method":"GET","path":"/b","body":"{}"},
      {"method":"GET","path":"/c","status":301,"headers":{"Location":"http://elsewhere.example.net/x"}}]})"));
  HttpTransport t(mock.transport_options());
  std::vector<Endpoint> inv = {MakeEndpoint("http://api.example.com/a", {"GET"}),
                               MakeEndpoint("http://api.example.com/c", {"GET"})};
  auto r = Scan(inv, FastConfig(), t);
  size_t b_hits = 0;
  for (const auto& entry : mock.server().Log()) b_hits += entry.path == "/b" ? 1 : 0;
  EXPECT_GE(b_hits, 1u);
  bool cross = false;
  for (const auto& n : r.notes) {
    cross |= n.endpoint == "http://api.example.com/c" &&
             n.message.find("elsewhere.example.net") != std::string::npos;
  }
  EXPECT_TRUE(cross);
  for (const auto& entry : mock.server().Log()) EXPECT_NE(entry.path, "/x");
}

TEST(ScanTest, ConcurrencyAndRate) {
  if (NetworkForcedOff()) GTEST_SKIP() << "network forced off";
  testing::RunningMock mock(MockProfile::Parse(
      R"({"name":"slow","flaws":[],"routes":[{"method":"GET","path":"/s","delay_ms":40,"body":"{}"}]})"));
  HttpTransport t(mock.transport_options());
  std::vector<Endpoint> inv;
  for (int i = 0; i < 3; ++i) {
    Endpoint e = MakeEndpoint("http://h" + std::to_string(i) + ".example.com/s", {"GET"});
    inv.push_back(e);
  }
  ScanConfig cfg = FastConfig();
  cfg.max_concurrency = 3;
  cfg.requests_per_second_cap = 200;
  auto r = Scan(inv, cfg, t);
  auto log = mock.server().Log();
  ASSERT_EQ(log.size(), r.probes_sent);
  int peak = 0;
  for (const auto& a : log) {
    int live = 0;
    for (const auto& b : log) live += (b.start_us <= a.start_us && a.start_us < b.end_us) ? 1 : 0;
    peak = std::max(peak, live);
  }
  EXPECT_LE(peak, 3);
  EXPECT_GE(peak, 2);
  std::vector<int64_t> starts;
  for (const auto& e : log) starts.push_back(e.start_us);
  std::sort(starts.begin(), starts.end());
  // 200 rps: never more than 21 starts inside any 100 ms window.
  for (size_t i = 0; i < starts.size(); ++i) {
    size_t j = i;
    while (j < starts.size() && starts[j] - starts[i] < 100000) ++j;
    EXPECT_LE(j - i, 21u);
  }
}

TEST(SortTest, SeverityFirst) {
  std::vector<Finding> f(3);
  f[0].severity = Severity::kLow;
  f[0].endpoint = "a";
  f[1].severity = Severity::kHigh;
  f[1].endpoint = "z";
  f[2].severity = Severity::kMedium;
  SortFindings(f);
  EXPECT_EQ(f[0].severity, Severity::kHigh);
  EXPECT_EQ(f[2].severity, Severity::kLow);
}

}  // namespace
}  // namespace androscan
