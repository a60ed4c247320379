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

// Where a row format starts beating the hybrid format as projections widen.
// The projected width is treated as continuous (fraction * cols) so the
// crossing can be located precisely.

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "fmtsel/cost_model.hpp"
#include "fmtsel/error.hpp"
#include "fmtsel/formats.hpp"
#include "fmtsel/layout_model.hpp"
#include "json.hpp"

namespace fmtsel {

struct CrossoverPoint {
  double fraction = 0.0;
  double hybrid_cost = 0.0;
  std::vector<double> horizontal_costs;  // parallel to CrossoverReport::horizontal
};

struct CrossoverReport {
  std::string hybrid;
  std::vector<std::string> horizontal;
  std::vector<CrossoverPoint> curve;
  std::vector<double> crossings;  // fractions in (0,1), ascending

  nlohmann::json ToJson() const {
    nlohmann::json curve_json = nlohmann::json::array();
    for (const auto& p : curve) {
      nlohmann::json row = {{"fraction", p.fraction}, {hybrid, p.hybrid_cost}};
      for (size_t i = 0; i < horizontal.size(); ++i) row[horizontal[i]] = p.horizontal_costs[i];
      curve_json.push_back(row);
    }
    return {{"hybrid", hybrid},
            {"horizontal", horizontal},
            {"crossings", crossings},
            {"curve", curve_json}};
  }
};

inline double HybridProjectionCost(double fraction, const DataStats& stats,
                                   const FormatDescriptor& hybrid, const SystemProfile& sys) {
  return ProjectCostHybridFor(fraction * stats.Cols(), stats, AsGeometry(hybrid, stats), sys,
                              FormatSections(stats, hybrid).total)
      .weighted_cost;
}

// Sweeps fraction over [0,1] in `steps` intervals. The hybrid curve is
// compared against the cheapest row format; every sign change of the
// difference is refined by bisection.
inline CrossoverReport FindCrossover(const DataStats& stats, const FormatDescriptor& hybrid,
                                     const std::vector<FormatDescriptor>& horizontal,
                                     const SystemProfile& sys, int steps = 200) {
  if (hybrid.kind() != LayoutKind::kHybrid) {
    throw Error(ErrorCode::kKindMismatch, hybrid.name() + " is not a hybrid format");
  }
  if (horizontal.empty() || steps < 2) {
    throw Error(ErrorCode::kPrecondition, "need row formats and >= 2 steps");
  }
  CrossoverReport report;
  report.hybrid = hybrid.name();
  std::vector<double> flat;
  for (const auto& fd : horizontal) {
    if (fd.kind() != LayoutKind::kHorizontal) {
      throw Error(ErrorCode::kKindMismatch, fd.name() + " is not a row format");
    }
    report.horizontal.push_back(fd.name());
    // Row formats read everything whatever the projection.
    flat.push_back(FormatReadCost(OperationProfile::Scan(), stats, fd, sys).weighted_cost);
  }
  const double best_row = *std::min_element(flat.begin(), flat.end());
  auto diff = [&](double f) { return HybridProjectionCost(f, stats, hybrid, sys) - best_row; };

  for (int i = 0; i <= steps; ++i) {
    const double f = static_cast<double>(i) / steps;
    report.curve.push_back({f, HybridProjectionCost(f, stats, hybrid, sys), flat});
  }
  for (int i = 0; i < steps; ++i) {
    double lo = report.curve[i].fraction;
    double hi = report.curve[i + 1].fraction;
    double dlo = report.curve[i].hybrid_cost - best_row;
    const double dhi = report.curve[i + 1].hybrid_cost - best_row;
    if ((dlo < 0.0) == (dhi < 0.0)) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double dmid = diff(mid);
      if ((dmid < 0.0) == (dlo < 0.0)) {
        lo = mid;
        dlo = dmid;
      } else {
        hi = mid;
      }
    }
    const double x = 0.5 * (lo + hi);
    if (x > 0.0 && x < 1.0) report.crossings.push_back(x);
  }
  return report;
}

}  // namespace fmtsel
