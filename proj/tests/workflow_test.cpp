// Copyright 2026 The fmtsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fmtsel/catalog.hpp"
#include "fmtsel/fixtures.hpp"
#include "fmtsel/workflow.hpp"

namespace fmtsel {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kPrecondition;
}

TEST(Parse, LoadStore) {
  const Workflow wf = Workflow::Parse(R"({"nodes":[{"id":"a","kind":"LOAD","source":"t"},
      {"id":"b","kind":"STORE"}],"edges":[{"from":"a","to":"b"}]})");
  EXPECT_EQ(wf.nodes().size(), 2u);
  EXPECT_TRUE(wf.SelectMaterializationNodes(MaterializationMode::kBoth).empty());
}

TEST(Parse, Errors) {
  EXPECT_EQ(CodeOf([] {
              Workflow::Parse(R"({"nodes":[{"id":"l","kind":"LOAD"},{"id":"a","kind":"FILTER"},
                  {"id":"b","kind":"FILTER"}],"edges":[{"from":"l","to":"a"},{"from":"a","to":"b"},
                  {"from":"b","to":"a"}]})");
            }),
            ErrorCode::kCycleDetected);
  EXPECT_EQ(CodeOf([] { Workflow::Parse("{"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { Workflow::Parse(R"({"nodes":[{"id":"a","kind":"SORT"}]})"); }),
            ErrorCode::kUnknownOperationKind);
  EXPECT_EQ(CodeOf([] { Workflow::Parse(R"({"nodes":[{"id":"a","kind":"JOIN"}]})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              Workflow::Parse(R"({"nodes":[{"id":"a","kind":"LOAD"}],
                  "edges":[{"from":"a","to":"zz"}]})");
            }),
            ErrorCode::kParseError);
}

TEST(Parse, RoundTrip) {
  const Workflow wf = fixtures::SalesWorkflow();
  EXPECT_EQ(Workflow::FromJson(wf.ToJson()).ToJson(), wf.ToJson());
}

TEST(Materialization, SharedJoin) {
  const Workflow wf = Workflow::Parse(R"({"nodes":[
      {"id":"a","kind":"LOAD","source":"x"},{"id":"b","kind":"LOAD","source":"y"},
      {"id":"j","kind":"JOIN"},{"id":"q1","kind":"GROUPBY"},{"id":"q2","kind":"FOREACH","ref_cols":2},
      {"id":"s1","kind":"STORE"},{"id":"s2","kind":"STORE"}],
      "edges":[{"from":"a","to":"j"},{"from":"b","to":"j"},{"from":"j","to":"q1"},
      {"from":"j","to":"q2"},{"from":"q1","to":"s1"},{"from":"q2","to":"s2"}]})");
  EXPECT_EQ(wf.SelectMaterializationNodes(MaterializationMode::kAggressive),
            std::vector<std::string>{"j"});
  EXPECT_TRUE(wf.SelectMaterializationNodes(MaterializationMode::kConservative).empty());
}

TEST(Materialization, SalesFixtureSelectsNine) {
  const Workflow wf = fixtures::SalesWorkflow();
  auto nodes = wf.SelectMaterializationNodes(MaterializationMode::kBoth);
  std::sort(nodes.begin(), nodes.end());
  std::vector<std::string> expected(fixtures::kSharedNodes.begin(), fixtures::kSharedNodes.end());
  EXPECT_EQ(nodes, expected);
  size_t joins = 0;
  size_t filters = 0;
  for (const auto& id : nodes) {
    joins += wf.node(id).kind == NodeKind::kJoin;
    filters += wf.node(id).kind == NodeKind::kFilter;
  }
  EXPECT_EQ(joins, 6u);
  EXPECT_EQ(filters, 3u);
}

TEST(Materialization, OutgoingOps) {
  const Workflow wf = fixtures::SalesWorkflow();
  const auto n2 = wf.OutgoingOps("N2");
  ASSERT_EQ(n2.size(), 3u);
  EXPECT_EQ(std::count_if(n2.begin(), n2.end(),
                          [](const OperationProfile& op) { return op.kind == OpKind::kSelect; }),
            1);
  for (const auto& op : wf.OutgoingOps("N5")) {
    EXPECT_EQ(op.kind, OpKind::kProject);
    EXPECT_EQ(*op.ref_cols, 3u);
  }
}

TEST(Fingerprint, IgnoresIdsButNotStructure) {
  const Workflow a = Workflow::Parse(R"({"nodes":[{"id":"l","kind":"LOAD","source":"t"},
      {"id":"f","kind":"FILTER","sf":0.1}],"edges":[{"from":"l","to":"f"}]})");
  const Workflow b = Workflow::Parse(R"({"nodes":[{"id":"x","kind":"LOAD","source":"t"},
      {"id":"y","kind":"FILTER","sf":0.1}],"edges":[{"from":"x","to":"y"}]})");
  const Workflow c = Workflow::Parse(R"({"nodes":[{"id":"l","kind":"LOAD","source":"t"},
      {"id":"f","kind":"FILTER","sf":0.2}],"edges":[{"from":"l","to":"f"}]})");
  EXPECT_EQ(a.Fingerprint("f"), b.Fingerprint("y"));
  EXPECT_NE(a.Fingerprint("f"), c.Fingerprint("f"));
  EXPECT_EQ(a.Fingerprint("f").size(), 16u);
}

TEST(Fingerprint, DistinctAcrossSharedNodes) {
  const Workflow wf = fixtures::SalesWorkflow();
  std::set<std::string> seen;
  for (const auto& id : fixtures::kSharedNodes) seen.insert(wf.Fingerprint(id));
  EXPECT_EQ(seen.size(), fixtures::kSharedNodes.size());
}

NodeStats Sample() {
  NodeStats s;
  s.data = fixtures::SyntheticNodeStats(1000, 10, 8, 0.7);
  s.ops = {OperationProfile::Scan(), OperationProfile::Select(0.1)};
  return s;
}

TEST(Catalog, RecordAndLookup) {
  StatsCatalog c;
  c.Record("aa", Sample());
  EXPECT_EQ(c.size(), 1u);
  c.Record("aa", Sample());
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(c.version(), 2u);
  EXPECT_EQ(c.Lookup("aa"), Sample());
  EXPECT_FALSE(c.Lookup("bb").has_value());
  NodeStats bad = Sample();
  bad.ops.push_back(OperationProfile::Select(1.3));
  EXPECT_EQ(CodeOf([&] { c.Record("cc", bad); }), ErrorCode::kInconsistentStats);
}

TEST(Catalog, IncompleteEntriesComeBackAsIs) {
  StatsCatalog c;
  NodeStats partial;
  partial.ops = {OperationProfile::Scan()};
  c.Record("p", partial);
  ASSERT_TRUE(c.Lookup("p").has_value());
  EXPECT_FALSE(c.Lookup("p")->Complete());
}

class CatalogFile : public ::testing::Test {
 protected:
  std::string path_ = (std::filesystem::temp_directory_path() /
                       ("fmtsel_catalog_" + std::to_string(::getpid()) + ".json"))
                          .string();
  void TearDown() override { std::remove(path_.c_str()); }
};

TEST_F(CatalogFile, RoundTrips) {
  StatsCatalog().Save(path_);
  EXPECT_EQ(StatsCatalog::Load(path_), StatsCatalog());
  const StatsCatalog sales = fixtures::SalesCatalog();
  sales.Save(path_);
  EXPECT_EQ(StatsCatalog::Load(path_), sales);
  EXPECT_EQ(sales.size(), 9u);
}

TEST_F(CatalogFile, CorruptedOrWrongVersion) {
  std::ofstream(path_) << "{\"entries\": [";
  EXPECT_EQ(CodeOf([&] { StatsCatalog::Load(path_); }), ErrorCode::kSchemaVersionMismatch);
  std::ofstream(path_) << R"({"schema_version": 2, "version": 0, "entries": {}})";
  EXPECT_EQ(CodeOf([&] { StatsCatalog::Load(path_); }), ErrorCode::kSchemaVersionMismatch);
  EXPECT_EQ(CodeOf([&] { StatsCatalog::Load(path_ + ".missing"); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace fmtsel
