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

// Oracle suites comparing the estimates against the reference writers, the
// Monte Carlo hit estimator and the replay simulator. Every suite is a pure
// function of its options and seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fmtsel/cost_model.hpp"
#include "fmtsel/formats.hpp"
#include "fmtsel/layout_model.hpp"
#include "fmtsel/random.hpp"
#include "fmtsel/reference_writer.hpp"
#include "fmtsel/report.hpp"
#include "fmtsel/simulation.hpp"
#include "json.hpp"

namespace fmtsel {

struct ValidationPoint {
  std::string label;
  double parameter = 0.0;
  double estimated = 0.0;
  double actual = 0.0;
  double error = 0.0;  // signed; relative unless the suite says absolute
  bool pass = true;
};

struct SuiteResult {
  std::string name;
  std::string metric;  // "relative" or "absolute" error, or "agreement"
  double tolerance = 0.0;
  std::vector<ValidationPoint> points;
  double score = 0.0;  // suite-specific summary (e.g. agreement rate)
  bool passed = true;

  double MaxAbsError() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, std::fabs(p.error));
    return m;
  }
};

inline double RelativeError(double estimated, double actual) {
  if (actual == 0.0) return estimated == 0.0 ? 0.0 : 1.0;
  return (estimated - actual) / actual;
}

namespace detail {

inline void Finish(SuiteResult& s) {
  s.passed = std::all_of(s.points.begin(), s.points.end(),
                         [](const ValidationPoint& p) { return p.pass; });
}

inline ValidationPoint RelativePoint(std::string label, double parameter, double estimated,
                                     double actual, double tolerance) {
  ValidationPoint p{std::move(label), parameter, estimated, actual,
                    RelativeError(estimated, actual), true};
  p.pass = std::fabs(p.error) <= tolerance;
  return p;
}

inline ValidationPoint IdentityPoint(std::string label, const CostEstimate& a,
                                     const CostEstimate& b) {
  ValidationPoint p{std::move(label), 0.0, a.weighted_cost, b.weighted_cost, 0.0, a == b};
  p.error = a.weighted_cost - b.weighted_cost;
  return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// File sizes against the reference writers.

struct SizeSweepOptions {
  std::vector<uint64_t> rows = {1000, 10000, 100000, 1000000, 10000000};
  std::vector<uint32_t> cols = {4, 12, 30};
  std::vector<std::string> formats = {"seqfile", "avro", "parquet", "vertical"};
  uint32_t min_width = 2;
  uint32_t max_width = 16;
  double varlen_share = 1.0 / 3.0;
  double tolerance = 0.05;
};

inline SyntheticTable RandomTable(uint64_t rows, uint32_t cols, uint32_t min_width,
                                  uint32_t max_width, double varlen_share, uint64_t seed) {
  Rng rng(seed);
  SyntheticTable t;
  t.row_count = rows;
  t.seed = seed;
  for (uint32_t c = 0; c < cols; ++c) {
    t.widths.push_back(min_width + static_cast<uint32_t>(rng.Below(max_width - min_width + 1)));
    t.varlen.push_back(rng.Uniform() < varlen_share);
  }
  t.sort_key = 0;
  return t;
}

inline SuiteResult RunSizeSuite(uint64_t seed, const SizeSweepOptions& o = {}) {
  SuiteResult s{"size", "relative", o.tolerance, {}, 0.0, true};
  uint64_t index = 0;
  for (uint64_t rows : o.rows) {
    for (uint32_t cols : o.cols) {
      const SyntheticTable t =
          RandomTable(rows, cols, o.min_width, o.max_width, o.varlen_share, DeriveSeed(seed, index++));
      const DataStats stats = t.ToStats();
      for (const auto& name : o.formats) {
        const FormatDescriptor fd = FormatByName(name);
        const double estimated = FormatSections(stats, fd).total;
        const double actual = static_cast<double>(WriteReferenceFile(t, fd).total());
        s.points.push_back(detail::RelativePoint(
            name + " rows=" + std::to_string(rows) + " cols=" + std::to_string(cols),
            static_cast<double>(rows), estimated, actual, o.tolerance));
      }
    }
  }
  detail::Finish(s);
  s.score = s.MaxAbsError();
  return s;
}

// ---------------------------------------------------------------------------
// Projected bytes against column-chunk accounting.

struct ProjectionSweepOptions {
  uint64_t rows = 2000000;
  uint32_t cols = 25;
  uint32_t min_ref = 5;
  uint32_t subsets = 100;
  double tolerance = 0.05;
};

inline SuiteResult RunProjectionSuite(uint64_t seed, const SystemProfile& sys,
                                      const ProjectionSweepOptions& o = {}) {
  SuiteResult s{"projection", "relative", o.tolerance, {}, 0.0, true};
  const SyntheticTable t = RandomTable(o.rows, o.cols, 2, 16, 0.0, DeriveSeed(seed, 7001));
  const DataStats stats = t.ToStats();
  const FormatDescriptor parquet = ParquetFormat();
  const WriteResult file = WriteReferenceFile(t, parquet);
  for (uint32_t ref = o.min_ref; ref <= o.cols; ++ref) {
    const OperationProfile op = OperationProfile::Project(ref);
    const double estimated = FormatReadSize(op, stats, parquet, sys);
    const double actual =
        SimulateOperation(op, t, file, parquet, sys, DeriveSeed(seed, ref), {o.subsets}).bytes;
    s.points.push_back(detail::RelativePoint("parquet ref_cols=" + std::to_string(ref), ref,
                                             estimated, actual, o.tolerance));
  }
  // Row formats have no projection path.
  for (const char* name : {"seqfile", "avro"}) {
    const FormatDescriptor fd = FormatByName(name);
    for (uint32_t ref : {1u, o.cols / 2, o.cols}) {
      s.points.push_back(detail::IdentityPoint(
          std::string(name) + " project==scan ref_cols=" + std::to_string(ref),
          FormatReadCost(OperationProfile::Project(ref), stats, fd, sys),
          FormatReadCost(OperationProfile::Scan(), stats, fd, sys)));
    }
  }
  detail::Finish(s);
  s.score = s.MaxAbsError();
  return s;
}

// ---------------------------------------------------------------------------
// Selected bytes against simulated predicate placement.

struct SelectionSweepOptions {
  uint64_t rows = 10000000;
  uint32_t cols = 25;
  uint32_t width = 8;
  std::vector<double> selectivities = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.5};
  uint32_t unsorted_trials = 2000;
  double tolerance = 0.06;
};

inline SuiteResult RunSelectionSuite(uint64_t seed, const SystemProfile& sys,
                                     const SelectionSweepOptions& o = {}) {
  SuiteResult s{"selection", "relative", o.tolerance, {}, 0.0, true};
  SyntheticTable t;
  t.row_count = o.rows;
  t.widths.assign(o.cols, o.width);
  t.sort_key = 0;
  t.seed = seed;
  const DataStats stats = t.ToStats();
  const FormatDescriptor parquet = ParquetFormat();
  const WriteResult file = WriteReferenceFile(t, parquet);
  uint64_t index = 0;
  for (bool sorted : {true, false}) {
    for (double sf : o.selectivities) {
      const OperationProfile op = OperationProfile::Select(sf, sorted);
      const double estimated = FormatReadSize(op, stats, parquet, sys);
      const uint32_t trials = sorted ? 1 : o.unsorted_trials;
      const double actual =
          SimulateOperation(op, t, file, parquet, sys, DeriveSeed(seed, 9000 + index++), {trials})
              .bytes;
      s.points.push_back(detail::RelativePoint(
          std::string("parquet ") + (sorted ? "sorted" : "unsorted") + " sf=" + Fmt6(sf), sf,
          estimated, actual, o.tolerance));
    }
  }
  DataStats small;
  small.row_count = 1000000;
  small.col_count = 10;
  small.avg_col_size = 10;
  small.avg_row_size = 100;
  for (const char* name : {"seqfile", "avro", "vertical"}) {
    const FormatDescriptor fd = FormatByName(name);
    for (double sf : {0.0, 0.01, 0.5, 1.0}) {
      for (bool sorted : {false, true}) {
        s.points.push_back(detail::IdentityPoint(
            std::string(name) + " select==scan sf=" + Fmt6(sf) + (sorted ? " sorted" : ""),
            FormatReadCost(OperationProfile::Select(sf, sorted), small, fd, sys),
            FormatReadCost(OperationProfile::Scan(), small, fd, sys)));
      }
    }
  }
  detail::Finish(s);
  s.score = s.MaxAbsError();
  return s;
}

// ---------------------------------------------------------------------------
// Row-group hit probability against Monte Carlo placement.

struct HitSweepOptions {
  std::vector<double> selectivities = {1e-5, 1e-3, 0.1, 0.19, 0.92};
  std::vector<uint64_t> rows_per_group = {1000, 10000, 100000};
  uint64_t group_count = 64;
  uint64_t trials = 100000;
  double tolerance = 0.01;
};

inline SuiteResult RunHitProbabilitySuite(uint64_t seed, const HitSweepOptions& o = {}) {
  SuiteResult s{"hit-probability", "absolute", o.tolerance, {}, 0.0, true};
  uint64_t index = 0;
  for (double sf : o.selectivities) {
    for (uint64_t r : o.rows_per_group) {
      const double analytic = RowGroupHitProbability(sf, static_cast<double>(r));
      const double mc =
          MonteCarloRowGroupHit(r, o.group_count, sf, o.trials, DeriveSeed(seed, 5000 + index++));
      ValidationPoint p{"sf=" + Fmt6(sf) + " rows_per_group=" + std::to_string(r), sf, analytic,
                        mc, analytic - mc, true};
      p.pass = std::fabs(p.error) <= o.tolerance;
      s.points.push_back(p);
    }
  }
  detail::Finish(s);
  s.score = s.MaxAbsError();
  return s;
}

// ---------------------------------------------------------------------------
// Format ranking by estimate against ranking by replayed seconds.

struct OrderingOptions {
  uint32_t configs = 200;
  uint32_t min_groups = 2;  // smaller files are outside the ranked domain
  uint32_t max_groups = 12;
  uint32_t min_row_bytes = 256;
  uint32_t max_row_bytes = 2048;
  uint32_t predicate_trials = 16;
  double required_agreement = 0.95;
  std::vector<std::string> formats = {"seqfile", "avro", "parquet"};
};

struct OrderingCase {
  SyntheticTable table;
  OperationProfile op;
};

inline OrderingCase RandomOrderingCase(uint64_t seed, const OrderingOptions& o,
                                       double row_group_size) {
  Rng rng(seed);
  OrderingCase c;
  const uint32_t cols = 8 + static_cast<uint32_t>(rng.Below(25));
  const uint32_t target =
      o.min_row_bytes + static_cast<uint32_t>(rng.Below(o.max_row_bytes - o.min_row_bytes + 1));
  const uint32_t max_width = std::max<uint32_t>(2, 2 * target / cols);
  uint64_t row_bytes = 0;
  for (uint32_t i = 0; i < cols; ++i) {
    c.table.widths.push_back(1 + static_cast<uint32_t>(rng.Below(max_width)));
    row_bytes += c.table.widths.back();
  }
  const double groups = o.min_groups + rng.Uniform() * (o.max_groups - o.min_groups);
  c.table.row_count = static_cast<uint64_t>(groups * row_group_size / row_bytes);
  c.table.sort_key = 0;
  c.table.seed = seed;
  switch (rng.Below(4)) {
    case 0: c.op = OperationProfile::Scan(); break;
    case 1: c.op = OperationProfile::Project(1 + static_cast<uint32_t>(rng.Below(cols))); break;
    default: {
      const double sf = std::exp(std::log(1e-5) + rng.Uniform() * (std::log(0.5) - std::log(1e-5)));
      c.op = OperationProfile::Select(sf, rng.Below(2) == 0);
    }
  }
  return c;
}

// True when both orderings agree on every pair; pairs whose estimates tie
// exactly may come out either way.
inline bool SameRanking(const std::vector<double>& estimated, const std::vector<double>& actual) {
  for (size_t i = 0; i < estimated.size(); ++i) {
    for (size_t j = i + 1; j < estimated.size(); ++j) {
      const double de = estimated[i] - estimated[j];
      const double da = actual[i] - actual[j];
      if (de == 0.0) continue;
      if ((de < 0.0) != (da < 0.0) || da == 0.0) return false;
    }
  }
  return true;
}

inline SuiteResult RunOrderingSuite(uint64_t seed, const SystemProfile& sys,
                                    const OrderingOptions& o = {}, const std::string& name = "ordering") {
  SuiteResult s{name, "agreement", o.required_agreement, {}, 0.0, true};
  std::vector<FormatDescriptor> formats;
  for (const auto& f : o.formats) formats.push_back(FormatByName(f));
  const double rg = ParquetFormat().Get("row_group");
  uint32_t agree = 0;
  for (uint32_t i = 0; i < o.configs; ++i) {
    const uint64_t case_seed = DeriveSeed(seed, 20000 + i);
    const OrderingCase c = RandomOrderingCase(case_seed, o, rg);
    const DataStats stats = c.table.ToStats();
    std::vector<double> estimated;
    std::vector<double> actual;
    const uint32_t trials = c.op.kind == OpKind::kScan ? 1 : o.predicate_trials;
    for (const auto& fd : formats) {
      estimated.push_back(FormatReadCost(c.op, stats, fd, sys).seconds);
      // Same seed for every format: identical chunk placement and predicates.
      actual.push_back(SimulateOperation(c.op, c.table, fd, sys, case_seed, {trials}).seconds);
    }
    const bool same = SameRanking(estimated, actual);
    agree += same;
    std::string label = std::string(OpKindName(c.op.kind)) + " rows=" +
                        std::to_string(c.table.row_count) + " cols=" +
                        std::to_string(c.table.Cols());
    if (c.op.ref_cols) label += " ref_cols=" + std::to_string(*c.op.ref_cols);
    if (c.op.selectivity) label += " sf=" + Fmt6(*c.op.selectivity) + (c.op.sorted ? " sorted" : "");
    const auto best_e = std::min_element(estimated.begin(), estimated.end()) - estimated.begin();
    const auto best_a = std::min_element(actual.begin(), actual.end()) - actual.begin();
    s.points.push_back({label + " best=" + o.formats[best_e], static_cast<double>(i),
                        estimated[best_e], actual[best_a], same ? 0.0 : 1.0, same});
  }
  s.score = o.configs ? static_cast<double>(agree) / o.configs : 1.0;
  s.passed = s.score >= o.required_agreement;
  return s;
}

// ---------------------------------------------------------------------------

struct ValidationReport {
  uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
  }

  nlohmann::json ToJson() const {
    nlohmann::json js = nlohmann::json::array();
    for (const auto& s : suites) {
      nlohmann::json points = nlohmann::json::array();
      for (const auto& p : s.points) {
        points.push_back({{"label", p.label},
                          {"parameter", p.parameter},
                          {"estimated", p.estimated},
                          {"actual", p.actual},
                          {"error", p.error},
                          {"pass", p.pass}});
      }
      js.push_back({{"name", s.name},
                    {"metric", s.metric},
                    {"tolerance", s.tolerance},
                    {"score", s.score},
                    {"passed", s.passed},
                    {"points", points}});
    }
    return {{"seed", seed}, {"passed", passed()}, {"suites", js}};
  }

  std::string ToCsv() const {
    std::string out = CsvRow({"suite", "label", "parameter", "estimated", "actual", "error_pct", "pass"});
    for (const auto& s : suites) {
      for (const auto& p : s.points) {
        out += CsvRow({s.name, p.label, FmtFull(p.parameter), FmtFull(p.estimated),
                       FmtFull(p.actual), FmtFull(100.0 * p.error), p.pass ? "1" : "0"});
      }
    }
    return out;
  }

  std::string ToText() const {
    std::string out;
    for (const auto& s : suites) {
      out += s.name + ": " + (s.passed ? "PASS" : "FAIL") + " (" + s.metric + ", tolerance " +
             Fmt6(s.tolerance) + ", score " + Fmt6(s.score) + ", " +
             std::to_string(s.points.size()) + " points)\n";
      for (const auto& p : s.points) {
        if (!p.pass) {
          out += "  fail: " + p.label + " estimated=" + Fmt6(p.estimated) +
                 " actual=" + Fmt6(p.actual) + " error=" + Fmt6(p.error) + "\n";
        }
      }
    }
    out += std::string("overall: ") + (passed() ? "PASS" : "FAIL") + "\n";
    return out;
  }
};

struct ValidationOptions {
  SizeSweepOptions size;
  ProjectionSweepOptions projection;
  SelectionSweepOptions selection;
  HitSweepOptions hit;
  OrderingOptions ordering;
};

// Runs every suite. Ordering is checked twice: with stochastic locality, and
// with all reads local and no replication, where it must be exact.
inline ValidationReport RunValidation(uint64_t seed, const SystemProfile& sys,
                                      const ValidationOptions& o = {}) {
  ValidationReport r;
  r.seed = seed;
  r.suites.push_back(RunSizeSuite(seed, o.size));
  r.suites.push_back(RunProjectionSuite(seed, sys, o.projection));
  r.suites.push_back(RunSelectionSuite(seed, sys, o.selection));
  r.suites.push_back(RunHitProbabilitySuite(seed, o.hit));
  r.suites.push_back(RunOrderingSuite(seed, sys, o.ordering, "ordering"));
  SystemProfile local = sys;
  local.locality_probability = 1.0;
  local.replication_factor = 1;
  OrderingOptions exact = o.ordering;
  exact.required_agreement = 1.0;
  r.suites.push_back(RunOrderingSuite(seed, local, exact, "ordering-local"));
  return r;
}

}  // namespace fmtsel
