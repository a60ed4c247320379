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

#pragma once

// Bundled synthetic inputs. Nothing here is measured data: the workflow is a
// 16-query decision-support shape over a star schema, and every statistic is
// invented to sit in a plausible region.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fmtsel/catalog.hpp"
#include "fmtsel/layout_model.hpp"
#include "fmtsel/workflow.hpp"
#include "json.hpp"

namespace fmtsel::fixtures {

// Node ids of the nine shared intermediate results.
inline const std::array<std::string, 9> kSharedNodes = {"N1", "N2", "N3", "N4", "N5",
                                                        "N6", "N7", "N8", "N9"};

inline const std::array<std::string, 9> kRuleColumn = {
    "avro", "parquet", "parquet", "parquet", "parquet", "parquet", "parquet", "parquet", "avro"};

inline const std::array<std::string, 9> kCostColumn = {
    "avro", "avro", "avro", "avro", "parquet", "parquet", "avro", "avro", "avro"};

inline nlohmann::json SalesWorkflowJson() {
  using nlohmann::json;
  json nodes = json::array();
  json edges = json::array();
  auto node = [&](const std::string& id, const std::string& kind) -> json& {
    nodes.push_back({{"id", id}, {"kind", kind}});
    return nodes.back();
  };
  auto edge = [&](const std::string& from, const std::string& to) {
    edges.push_back({{"from", from}, {"to", to}});
  };
  auto load = [&](const std::string& table) {
    node("L_" + table, "LOAD")["source"] = table;
  };
  auto filter = [&](const std::string& id, const std::string& in, double sf) {
    node(id, "FILTER")["sf"] = sf;
    edge(in, id);
  };
  auto foreach = [&](const std::string& id, const std::string& in, int ref_cols) {
    node(id, "FOREACH")["ref_cols"] = ref_cols;
    edge(in, id);
  };
  auto join = [&](const std::string& id, const std::string& left, const std::string& right) {
    node(id, "JOIN");
    edge(left, id);
    edge(right, id);
  };
  int stores = 0;
  auto store = [&](const std::string& in) {
    const std::string id = "S" + std::to_string(++stores);
    node(id, "STORE");
    edge(in, id);
  };

  for (const char* t : {"store_sales", "date_dim", "item", "customer", "promotion",
                        "customer_address", "store", "web_sales"}) {
    load(t);
  }

  join("N1", "L_store_sales", "L_date_dim");
  join("N2", "N1", "L_item");
  join("N3", "N1", "L_promotion");
  join("N4", "N2", "L_store");
  filter("N5", "N3", 0.59);
  filter("N6", "N4", 0.2);
  join("N9", "L_web_sales", "L_date_dim");
  join("N8", "N9", "L_customer");
  filter("N7", "N8", 0.19);

  join("Q1", "N2", "L_customer");
  store("Q1");
  filter("Q2", "N2", 0.19);
  store("Q2");
  join("Q3", "N3", "L_customer_address");
  store("Q3");
  filter("Q4", "N3", 0.01);
  store("Q4");
  filter("Q5", "N4", 0.03);
  store("Q5");
  filter("Q6", "N4", 0.19);
  store("Q6");
  foreach("Q7", "N5", 3);
  store("Q7");
  foreach("Q8", "N5", 3);
  store("Q8");
  foreach("Q9", "N6", 4);
  store("Q9");
  foreach("Q10", "N6", 4);
  store("Q10");
  join("Q11", "N9", "L_item");
  store("Q11");
  join("Q12", "N8", "L_customer_address");
  store("Q12");
  filter("Q13", "N8", 0.03);
  store("Q13");
  filter("Q14", "N8", 0.01);
  store("Q14");
  filter("Q15", "N7", 0.13);
  store("Q15");
  filter("Q16", "N7", 0.92);
  store("Q16");
  return {{"nodes", nodes}, {"edges", edges}};
}

inline Workflow SalesWorkflow() { return Workflow::FromJson(SalesWorkflowJson()); }

// Output statistics for a shared node. avg_row_size is below
// avg_col_size * cols: row formats store values in a compact binary encoding
// while the column sizes include per-value framing.
inline DataStats SyntheticNodeStats(uint64_t rows, uint32_t cols, double avg_col, double rho) {
  DataStats s;
  s.row_count = rows;
  s.col_count = cols;
  s.avg_col_size = avg_col;
  s.avg_row_size = rho * avg_col * cols;
  s.varlen_col_count = 0;
  return s;
}

struct StatsSweep {
  std::vector<uint64_t> rows = {1000000, 10000000, 100000000};
  std::vector<uint32_t> cols = {16, 20, 24, 32};
  std::vector<double> avg_col = {6, 10, 16};
  std::vector<double> rho = {0.55, 0.7, 0.85};

  template <class Fn>
  void ForEach(Fn fn) const {
    for (uint64_t r : rows)
      for (uint32_t c : cols)
        for (double a : avg_col)
          for (double p : rho) fn(SyntheticNodeStats(r, c, a, p));
  }
};

// One point of the sweep per node, so the bundled catalog is not uniform.
inline DataStats BundledNodeStats(size_t node_index) {
  const StatsSweep sweep;
  return SyntheticNodeStats(sweep.rows[node_index % sweep.rows.size()],
                            sweep.cols[(node_index + 1) % sweep.cols.size()],
                            sweep.avg_col[(node_index / 3) % sweep.avg_col.size()],
                            sweep.rho[(node_index + 2) % sweep.rho.size()]);
}

inline NodeStats SharedNodeStats(const Workflow& wf, const std::string& id,
                                 const DataStats& data) {
  NodeStats s;
  s.data = data;
  s.ops = wf.OutgoingOps(id);
  return s;
}

inline StatsCatalog SalesCatalog() {
  const Workflow wf = SalesWorkflow();
  StatsCatalog catalog;
  for (size_t i = 0; i < kSharedNodes.size(); ++i) {
    catalog.Record(wf.Fingerprint(kSharedNodes[i]),
                   SharedNodeStats(wf, kSharedNodes[i], BundledNodeStats(i)));
  }
  return catalog;
}

// Wide join result used for the projection crossover: 25 columns, roughly
// 8 GB in the hybrid layout.
inline DataStats WideJoinStats() {
  DataStats s;
  s.row_count = 32000000;
  s.col_count = 25;
  s.avg_col_size = 10;
  s.avg_row_size = 180;
  return s;
}

}  // namespace fmtsel::fixtures
