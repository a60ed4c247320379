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

// Data-intensive workflows as DAGs of dataflow operators, the
// conservative/aggressive choice of which outputs to materialize, and
// structural fingerprints that identify an output across workflow versions.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmtsel/error.hpp"
#include "fmtsel/layout_model.hpp"
#include "json.hpp"

namespace fmtsel {

enum class NodeKind { kLoad, kFilter, kForeach, kJoin, kGroupBy, kStore };

inline const char* NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kLoad: return "LOAD";
    case NodeKind::kFilter: return "FILTER";
    case NodeKind::kForeach: return "FOREACH";
    case NodeKind::kJoin: return "JOIN";
    case NodeKind::kGroupBy: return "GROUPBY";
    case NodeKind::kStore: return "STORE";
  }
  return "?";
}

inline NodeKind ParseNodeKind(std::string_view name) {
  for (NodeKind k : {NodeKind::kLoad, NodeKind::kFilter, NodeKind::kForeach, NodeKind::kJoin,
                     NodeKind::kGroupBy, NodeKind::kStore}) {
    if (name == NodeKindName(k)) return k;
  }
  throw Error(ErrorCode::kUnknownOperationKind, "unknown node kind '" + std::string(name) + "'");
}

enum class MaterializationMode { kConservative, kAggressive, kBoth };

inline MaterializationMode ParseMaterializationMode(std::string_view name) {
  if (name == "conservative") return MaterializationMode::kConservative;
  if (name == "aggressive") return MaterializationMode::kAggressive;
  if (name == "both") return MaterializationMode::kBoth;
  throw Error(ErrorCode::kParseError, "unknown materialization mode '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// JSON helpers for the statistics types, shared with the catalog.

inline nlohmann::json StatsToJson(const DataStats& s) {
  return {{"rows", s.row_count},
          {"avg_row_size", s.avg_row_size},
          {"avg_col_size", s.avg_col_size},
          {"cols", s.col_count},
          {"varlen_cols", s.varlen_col_count}};
}

inline DataStats StatsFromJson(const nlohmann::json& j) {
  try {
    DataStats s;
    s.row_count = j.at("rows").get<uint64_t>();
    s.avg_row_size = j.at("avg_row_size").get<double>();
    s.avg_col_size = j.at("avg_col_size").get<double>();
    s.col_count = j.at("cols").get<uint32_t>();
    s.varlen_col_count = j.value("varlen_cols", 0u);
    s.Validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad stats: ") + e.what());
  }
}

inline nlohmann::json OpToJson(const OperationProfile& op) {
  nlohmann::json j = {{"kind", OpKindName(op.kind)}, {"frequency", op.frequency}};
  if (op.ref_cols) j["ref_cols"] = *op.ref_cols;
  if (op.selectivity) j["sf"] = *op.selectivity;
  if (op.kind == OpKind::kSelect) j["sorted"] = op.sorted;
  return j;
}

inline OperationProfile OpFromJson(const nlohmann::json& j) {
  try {
    OperationProfile op;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "scan") {
      op.kind = OpKind::kScan;
    } else if (kind == "project") {
      op.kind = OpKind::kProject;
    } else if (kind == "select") {
      op.kind = OpKind::kSelect;
    } else {
      throw Error(ErrorCode::kUnknownOperationKind, "unknown operation '" + kind + "'");
    }
    if (j.contains("ref_cols")) op.ref_cols = j.at("ref_cols").get<uint32_t>();
    if (j.contains("sf")) op.selectivity = j.at("sf").get<double>();
    op.sorted = j.value("sorted", false);
    op.frequency = j.value("frequency", 1.0);
    return op;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad operation: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

struct WorkflowNode {
  std::string id;
  NodeKind kind = NodeKind::kLoad;
  std::optional<double> sf;          // FILTER
  std::optional<uint32_t> ref_cols;  // FOREACH
  bool sorted = false;               // FILTER
  double frequency = 1.0;
  std::string source;                // LOAD
  std::optional<DataStats> stats;    // output statistics, if known inline
};

class Workflow {
 public:
  static Workflow FromJson(const nlohmann::json& doc) {
    Workflow wf;
    try {
      for (const auto& jn : doc.at("nodes")) {
        WorkflowNode n;
        n.id = jn.at("id").get<std::string>();
        n.kind = ParseNodeKind(jn.at("kind").get<std::string>());
        if (jn.contains("sf")) n.sf = jn.at("sf").get<double>();
        if (jn.contains("ref_cols")) n.ref_cols = jn.at("ref_cols").get<uint32_t>();
        n.sorted = jn.value("sorted", false);
        n.frequency = jn.value("frequency", 1.0);
        n.source = jn.value("source", std::string());
        if (jn.contains("stats")) n.stats = StatsFromJson(jn.at("stats"));
        if (!(n.frequency > 0.0)) throw Error(ErrorCode::kParseError, n.id + ": frequency <= 0");
        if (n.sf && !(*n.sf >= 0.0 && *n.sf <= 1.0)) {
          throw Error(ErrorCode::kParseError, n.id + ": sf outside [0,1]");
        }
        if (wf.index_.count(n.id)) throw Error(ErrorCode::kParseError, "duplicate id " + n.id);
        wf.index_[n.id] = wf.nodes_.size();
        wf.nodes_.push_back(std::move(n));
      }
      wf.consumers_.assign(wf.nodes_.size(), {});
      wf.producers_.assign(wf.nodes_.size(), {});
      for (const auto& je : doc.value("edges", nlohmann::json::array())) {
        const std::string from = je.at("from").get<std::string>();
        const std::string to = je.at("to").get<std::string>();
        if (!wf.index_.count(from) || !wf.index_.count(to)) {
          throw Error(ErrorCode::kParseError, "dangling edge " + from + " -> " + to);
        }
        wf.consumers_[wf.index_[from]].push_back(wf.index_[to]);
        wf.producers_[wf.index_[to]].push_back(wf.index_[from]);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, e.what());
    }
    wf.Check();
    return wf;
  }

  static Workflow Parse(std::string_view text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, e.what());
    }
    return FromJson(doc);
  }

  nlohmann::json ToJson() const {
    nlohmann::json nodes = nlohmann::json::array();
    nlohmann::json edges = nlohmann::json::array();
    for (size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      nlohmann::json jn = {{"id", n.id}, {"kind", NodeKindName(n.kind)}};
      if (n.sf) jn["sf"] = *n.sf;
      if (n.ref_cols) jn["ref_cols"] = *n.ref_cols;
      if (n.sorted) jn["sorted"] = true;
      if (n.frequency != 1.0) jn["frequency"] = n.frequency;
      if (!n.source.empty()) jn["source"] = n.source;
      if (n.stats) jn["stats"] = StatsToJson(*n.stats);
      nodes.push_back(jn);
      for (size_t c : consumers_[i]) edges.push_back({{"from", n.id}, {"to", nodes_[c].id}});
    }
    return {{"nodes", nodes}, {"edges", edges}};
  }

  const std::vector<WorkflowNode>& nodes() const { return nodes_; }

  const WorkflowNode& node(std::string_view id) const { return nodes_[IndexOf(id)]; }

  std::vector<const WorkflowNode*> Consumers(std::string_view id) const {
    std::vector<const WorkflowNode*> out;
    for (size_t c : consumers_[IndexOf(id)]) out.push_back(&nodes_[c]);
    return out;
  }

  // Downstream reads of a node's output, one per consuming edge.
  std::vector<OperationProfile> OutgoingOps(std::string_view id) const {
    std::vector<OperationProfile> ops;
    for (const WorkflowNode* c : Consumers(id)) {
      OperationProfile op;
      op.frequency = c->frequency;
      if (c->kind == NodeKind::kFilter) {
        op.kind = OpKind::kSelect;
        op.selectivity = c->sf;
        op.sorted = c->sorted;
      } else if (c->kind == NodeKind::kForeach) {
        op.kind = OpKind::kProject;
        op.ref_cols = c->ref_cols;
      }
      ops.push_back(op);
    }
    return ops;
  }

  // Structural hash of the sub-DAG producing `id`: node kinds, operator
  // attributes and load sources, independent of node ids.
  std::string Fingerprint(std::string_view id) const {
    const uint64_t h = Fnv1a(CanonicalForm(IndexOf(id)));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  std::vector<std::string> SelectMaterializationNodes(MaterializationMode mode) const {
    std::vector<std::string> out;
    for (size_t i = 0; i < nodes_.size(); ++i) {
      const NodeKind k = nodes_[i].kind;
      const bool conservative = k == NodeKind::kFilter || k == NodeKind::kForeach;
      const bool aggressive = k == NodeKind::kJoin || k == NodeKind::kGroupBy;
      const bool wanted = (mode != MaterializationMode::kAggressive && conservative) ||
                          (mode != MaterializationMode::kConservative && aggressive);
      if (!wanted) continue;
      // Only outputs read again by another operator are worth keeping.
      const bool reused = std::any_of(consumers_[i].begin(), consumers_[i].end(),
                                      [&](size_t c) { return nodes_[c].kind != NodeKind::kStore; });
      if (reused) out.push_back(nodes_[i].id);
    }
    return out;
  }

 private:
  size_t IndexOf(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
      throw Error(ErrorCode::kParseError, "no node '" + std::string(id) + "'");
    }
    return it->second;
  }

  void Check() const {
    for (size_t i = 0; i < nodes_.size(); ++i) {
      const bool is_load = nodes_[i].kind == NodeKind::kLoad;
      if (is_load && !producers_[i].empty()) {
        throw Error(ErrorCode::kParseError, nodes_[i].id + ": LOAD cannot have inputs");
      }
      if (!is_load && producers_[i].empty()) {
        throw Error(ErrorCode::kParseError, nodes_[i].id + ": missing input");
      }
    }
    // Kahn's algorithm; leftovers lie on a cycle.
    std::vector<size_t> indegree(nodes_.size());
    std::vector<size_t> ready;
    for (size_t i = 0; i < nodes_.size(); ++i) {
      indegree[i] = producers_[i].size();
      if (indegree[i] == 0) ready.push_back(i);
    }
    size_t seen = 0;
    while (!ready.empty()) {
      const size_t i = ready.back();
      ready.pop_back();
      ++seen;
      for (size_t c : consumers_[i]) {
        if (--indegree[c] == 0) ready.push_back(c);
      }
    }
    if (seen != nodes_.size()) throw Error(ErrorCode::kCycleDetected, "workflow has a cycle");
  }

  std::string CanonicalForm(size_t i) const {
    const WorkflowNode& n = nodes_[i];
    std::string s = NodeKindName(n.kind);
    s += '(';
    char buf[64];
    if (n.kind == NodeKind::kLoad) s += n.source;
    if (n.sf) {
      std::snprintf(buf, sizeof(buf), "sf=%.17g;", *n.sf);
      s += buf;
    }
    if (n.sorted) s += "sorted;";
    if (n.ref_cols) s += "ref=" + std::to_string(*n.ref_cols) + ";";
    s += ')';
    std::vector<std::string> inputs;
    for (size_t p : producers_[i]) inputs.push_back(CanonicalForm(p));
    std::sort(inputs.begin(), inputs.end());
    s += '[';
    for (const auto& in : inputs) s += in + ',';
    s += ']';
    return s;
  }

  static uint64_t Fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::vector<WorkflowNode> nodes_;
  std::map<std::string, size_t> index_;
  std::vector<std::vector<size_t>> consumers_;
  std::vector<std::vector<size_t>> producers_;
};

}  // namespace fmtsel
