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

// Format choice for one materialized output: heuristic rules when statistics
// are missing, minimum estimated I/O cost when they are complete.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "fmtsel/catalog.hpp"
#include "fmtsel/cost_model.hpp"
#include "fmtsel/error.hpp"
#include "fmtsel/formats.hpp"
#include "fmtsel/layout_model.hpp"
#include "json.hpp"

namespace fmtsel {

enum class DecidedBy { kRule, kCost };

inline const char* DecidedByName(DecidedBy d) { return d == DecidedBy::kRule ? "rule" : "cost"; }

struct CandidateCost {
  std::string format;
  SizeBreakdown sections;
  CostEstimate write;
  std::vector<OperationProfile> ops;
  std::vector<CostEstimate> reads;  // unweighted by frequency
  double total_cost = 0.0;
};

struct FormatChoice {
  std::string format;
  DecidedBy decided_by = DecidedBy::kRule;
  double total_cost = 0.0;  // 0 when decided by rules
  std::vector<CandidateCost> rank;  // ascending total_cost; empty for rules
};

inline std::vector<std::string> FormatNames(const std::vector<FormatDescriptor>& formats) {
  std::vector<std::string> names;
  for (const auto& f : formats) names.push_back(f.name());
  return names;
}

// Scan-like reads only: the row format. Any projection or selection: the
// hybrid format. Restricted candidate lists fall back to the richest format
// on offer.
inline std::string RuleBasedChoice(const std::vector<OperationProfile>& ops,
                                   const std::vector<std::string>& candidates = {"seqfile", "avro",
                                                                                 "parquet"}) {
  if (ops.empty()) throw Error(ErrorCode::kEmptyOpList, "no outgoing operations");
  if (candidates.empty()) throw Error(ErrorCode::kPrecondition, "no candidate formats");
  const bool scan_only = std::all_of(ops.begin(), ops.end(),
                                     [](const OperationProfile& op) { return op.kind == OpKind::kScan; });
  const std::string preferred = scan_only ? "avro" : "parquet";
  if (std::find(candidates.begin(), candidates.end(), preferred) != candidates.end()) {
    return preferred;
  }
  return *std::max_element(candidates.begin(), candidates.end(),
                           [](const std::string& a, const std::string& b) {
                             return FormatRichness(a) < FormatRichness(b);
                           });
}

inline CandidateCost EvaluateCandidate(const NodeStats& stats, const FormatDescriptor& fd,
                                       const SystemProfile& sys, double amortization_reads) {
  CandidateCost c;
  c.format = fd.name();
  c.sections = FormatSections(*stats.data, fd);
  c.write = WriteCost(c.sections.total, sys);
  c.ops = stats.ops;
  double reads = 0.0;
  for (const auto& op : stats.ops) {
    c.reads.push_back(FormatReadCost(op, *stats.data, fd, sys));
    reads += op.frequency * c.reads.back().weighted_cost;
  }
  c.total_cost = c.write.weighted_cost + amortization_reads * reads;
  return c;
}

inline FormatChoice CostBasedChoice(const NodeStats& stats,
                                    const std::vector<FormatDescriptor>& candidates,
                                    const SystemProfile& sys, double amortization_reads = 1.0) {
  if (!stats.Complete()) {
    throw Error(ErrorCode::kIncompleteStats, "cost-based choice needs complete statistics");
  }
  if (candidates.empty()) throw Error(ErrorCode::kPrecondition, "no candidate formats");
  if (!(amortization_reads >= 0.0)) {
    throw Error(ErrorCode::kPrecondition, "amortization_reads must be >= 0");
  }
  stats.Validate();
  for (const auto& op : stats.ops) op.Validate(*stats.data);
  FormatChoice choice;
  choice.decided_by = DecidedBy::kCost;
  for (const auto& fd : candidates) {
    choice.rank.push_back(EvaluateCandidate(stats, fd, sys, amortization_reads));
  }
  std::stable_sort(choice.rank.begin(), choice.rank.end(),
                   [](const CandidateCost& a, const CandidateCost& b) {
                     if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
                     return FormatRichness(a.format) > FormatRichness(b.format);
                   });
  choice.format = choice.rank.front().format;
  choice.total_cost = choice.rank.front().total_cost;
  return choice;
}

// `ops` are the outgoing reads known from the workflow shape; catalog
// statistics, when present, take precedence.
inline FormatChoice ChooseFormat(const std::vector<OperationProfile>& ops,
                                 const std::optional<NodeStats>& stats,
                                 const std::vector<FormatDescriptor>& candidates,
                                 const SystemProfile& sys, double amortization_reads = 1.0) {
  if (stats && stats->Complete()) {
    return CostBasedChoice(*stats, candidates, sys, amortization_reads);
  }
  FormatChoice choice;
  choice.decided_by = DecidedBy::kRule;
  const auto& kinds = stats && !stats->ops.empty() ? stats->ops : ops;
  choice.format = RuleBasedChoice(kinds, FormatNames(candidates));
  return choice;
}

inline nlohmann::json EstimateToJson(const CostEstimate& e) {
  return {{"chunks", e.chunks},
          {"seeks", e.seeks},
          {"weighted_cost", e.weighted_cost},
          {"seconds", e.seconds}};
}

inline nlohmann::json SectionsToJson(const SizeBreakdown& s) {
  return {{"header", s.header}, {"body", s.body}, {"footer", s.footer}, {"total", s.total}};
}

inline nlohmann::json Explain(const FormatChoice& choice) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : choice.rank) {
    nlohmann::json reads = nlohmann::json::array();
    for (size_t i = 0; i < c.reads.size(); ++i) {
      nlohmann::json r = OpToJson(c.ops[i]);
      r["cost"] = EstimateToJson(c.reads[i]);
      reads.push_back(r);
    }
    candidates.push_back({{"format", c.format},
                          {"sections", SectionsToJson(c.sections)},
                          {"write", EstimateToJson(c.write)},
                          {"reads", reads},
                          {"total_cost", c.total_cost}});
  }
  return {{"format", choice.format},
          {"decided_by", DecidedByName(choice.decided_by)},
          {"total_cost", choice.total_cost},
          {"candidates", candidates}};
}

}  // namespace fmtsel
