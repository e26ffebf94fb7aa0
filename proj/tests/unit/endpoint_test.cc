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

#include "androscan/endpoint.h"
#include "androscan/error.h"
#include "common/support.h"

namespace androscan {
namespace {

struct Counts {
  int total = 0, external = 0, internal = 0;
};

Counts CountOf(const std::vector<Endpoint>& inv) {
  std::set<std::string> ext, in;
  for (const auto& e : inv) (e.classification.external ? ext : in).insert(e.host);
  Counts c;
  for (const auto& e : inv) {
    ++c.total;
    (e.classification.external ? c.external : c.internal) += 1;
  }
  return c;
}

TEST(InventoryTest, BankCounts) {
  auto inv = testing::FixtureInventory("bank");
  Counts c = CountOf(inv);
  EXPECT_EQ(c.total, 4);
  EXPECT_EQ(c.external, 1);
  EXPECT_EQ(c.internal, 3);
  for (const auto& e : inv) {
    if (e.classification.external) {
      EXPECT_EQ(e.host, "fonts.gstatic.com");
      EXPECT_EQ(e.classification.vendor, "Google");
    } else {
      EXPECT_EQ(e.host, "insecurebankv2.local");
      // The DEX only holds "http://" plus a runtime host, so these come from traces.
      EXPECT_EQ(e.origin, Origin::kDynamic) << e.Key();
      EXPECT_EQ(e.methods, std::vector<std::string>{"POST"});
      EXPECT_EQ(e.body_encoding, BodyEncoding::kForm);
    }
  }
}

TEST(InventoryTest, HirectCounts) {
  auto inv = testing::FixtureInventory("hirect");
  Counts c = CountOf(inv);
  EXPECT_EQ(c.total, 20);
  EXPECT_EQ(c.external, 4);
  EXPECT_EQ(c.internal, 16);
  std::map<std::string, std::string> vendors;
  for (const auto& e : inv) {
    if (e.classification.external) vendors[e.host] = e.classification.vendor;
  }
  EXPECT_EQ(vendors["settings.crashlytics.com"], "Crashlytics");
  EXPECT_EQ(vendors["e.crashlytics.com"], "Crashlytics");
  EXPECT_EQ(vendors["api.wechat.com"], "WeChat");
  EXPECT_EQ(vendors["bcdn.wechat.com"], "WeChat");
}

TEST(InventoryTest, OrderedByHostThenPathWithUniqueKeys) {
  for (const char* app : {"bank", "hirect", "nodex"}) {
    auto inv = testing::FixtureInventory(app);
    std::set<std::string> keys;
    for (size_t i = 0; i < inv.size(); ++i) {
      EXPECT_TRUE(keys.insert(inv[i].Key()).second) << inv[i].Key();
      if (i) EXPECT_LE(std::tie(inv[i - 1].host, inv[i - 1].path), std::tie(inv[i].host, inv[i].path));
      for (const auto& p : inv[i].params) {
        if (!p.encrypted_suspect) EXPECT_EQ(p.entropy_bits_per_char, 0.0);
      }
    }
  }
}

TEST(InventoryTest, MergeUnionsOriginAndParams) {
  ApiCallTrace t;
  t.url = "https://api.example.com/v1/items?page=2";
  t.method = "get";
  t.headers = {{"X-Session", "s"}};
  auto inv = BuildInventory({{"https://api.example.com/v1/items?page=1&limit=5", false},
                             {"api.example.com/v1/other", true},
                             {"not a url", false}},
                            {t, t});
  ASSERT_EQ(inv.size(), 2u);
  const Endpoint& items = inv[0];
  EXPECT_EQ(items.path, "/v1/items");
  EXPECT_EQ(items.origin, Origin::kBoth);
  EXPECT_EQ(items.methods, std::vector<std::string>{"GET"});
  ASSERT_EQ(items.params.size(), 3u);
  // Query params come first (location order), then the header.
  EXPECT_EQ(items.params[0].name, "limit");
  EXPECT_EQ(items.FindParam("page", ParamLocation::kQuery)->example, "1");
  EXPECT_NE(items.FindParam("X-Session", ParamLocation::kHeader), nullptr);
  EXPECT_TRUE(inv[1].low_confidence);
  EXPECT_EQ(inv[1].scheme, "https");
}

TEST(InventoryTest, PathTemplatesBecomeParams) {
  auto inv = BuildInventory({{"https://api.example.com/u/{id}/post/%d", false}}, {});
  ASSERT_EQ(inv.size(), 1u);
  EXPECT_NE(inv[0].FindParam("id", ParamLocation::kPath), nullptr);
  EXPECT_NE(inv[0].FindParam("arg1", ParamLocation::kPath), nullptr);
}

TEST(InventoryTest, MethodsStayCanonical) {
  std::vector<std::string> m;
  for (const char* x : {"options", "POST", "get", "GET", "BREW", "head"}) AddMethod(m, x);
  EXPECT_EQ(m, (std::vector<std::string>{"GET", "POST", "HEAD", "OPTIONS", "BREW"}));
}

TEST(ClassifyTest, BundledVendorList) {
  VendorList v = VendorList::Bundled();
  EXPECT_EQ(v.vendors.size(), 61u);
  EXPECT_EQ(ClassifyHost("graph.facebook.com", v).vendor, "Facebook");
  EXPECT_EQ(ClassifyHost("firebaseinstallations.googleapis.com", v).external, true);
  EXPECT_EQ(ClassifyHost("api.hirectapp.com", v).external, false);
  EXPECT_TRUE(ClassifyHost("api.hirectapp.com", v).classified);
  EXPECT_EQ(ClassifyHost("insecurebankv2.local", v).external, false);
}

TEST(ClassifyTest, ShortNamesNeedLabelBoundary) {
  VendorList v = VendorList::Parse("Gson\nUrban-Airship=uairship\n");
  EXPECT_TRUE(ClassifyHost("gson.example.com", v).external);
  EXPECT_TRUE(ClassifyHost("gsoncdn.example.com", v).external);
  EXPECT_FALSE(ClassifyHost("bigson.example.com", v).external);
  EXPECT_EQ(ClassifyHost("device-api.urbanairship.com", v).vendor, "Urban-Airship");
  EXPECT_EQ(ClassifyHost("x.uairship.net", v).vendor, "Urban-Airship");
  v.short_name_max = 0;
  EXPECT_TRUE(ClassifyHost("bigson.example.com", v).external);
}

TEST(ClassifyTest, VendorListValidation) {
  EXPECT_THROW(VendorList::Parse("# only a comment\n"), Error);
  EXPECT_THROW(VendorList::Parse("=alias\n"), Error);
}

TEST(ApiDefinitionTest, EndpointListAndOpenApi) {
  auto list = LoadApiDefinition(R"({"endpoints":[{"url":"https://a.example.com/x","methods":["post"],
      "params":[{"name":"q","location":"body","example":"1"}],"body_encoding":"json"}]})");
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].methods, std::vector<std::string>{"POST"});
  EXPECT_EQ(list[0].body_encoding, BodyEncoding::kJson);
  EXPECT_EQ(list[0].origin, Origin::kStatic);

  auto oas = LoadApiDefinition(R"({"openapi":"3.0.0","servers":[{"url":"https://b.example.com/api"}],
      "paths":{"/users/{id}":{"get":{"parameters":[{"name":"id","in":"path"}]}}}})");
  ASSERT_EQ(oas.size(), 1u);
  EXPECT_EQ(oas[0].Key(), "https://b.example.com/api/users/{id}");
  EXPECT_NE(oas[0].FindParam("id", ParamLocation::kPath), nullptr);

  EXPECT_THROW(LoadApiDefinition("nope"), Error);
  EXPECT_THROW(LoadApiDefinition(R"({"x":1})"), Error);
  EXPECT_THROW(LoadApiDefinition(R"([{"nourl":1}])"), Error);
}

}  // namespace
}  // namespace androscan
