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

// Format-independent size and read-cost models for horizontal (row-wise),
// vertical (column-wise) and hybrid (row groups stored column-wise) layouts.
//
// Every function comes in two flavours where the whole-file size matters:
// the plain one derives Size(Layout) from the geometry, the *For variant takes
// it as an argument so that concrete formats can plug in their exact section
// totals.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "fmtsel/cost_model.hpp"
#include "fmtsel/error.hpp"

namespace fmtsel {

// Variable-length values carry a 4-byte length prefix.
inline constexpr double kVarlenPrefixBytes = 4.0;

struct DataStats {
  uint64_t row_count = 0;
  double avg_row_size = 0.0;  // payload bytes, prefixes excluded
  double avg_col_size = 0.0;  // payload bytes, prefixes excluded
  uint32_t col_count = 1;
  uint32_t varlen_col_count = 0;

  void Validate() const {
    if (col_count < 1) {
      throw Error(ErrorCode::kInvalidStats, "col_count must be >= 1");
    }
    if (varlen_col_count > col_count) {
      throw Error(ErrorCode::kInvalidStats, "varlen_col_count exceeds col_count");
    }
    if (!std::isfinite(avg_row_size) || !std::isfinite(avg_col_size) ||
        avg_row_size < 0.0 || avg_col_size < 0.0) {
      throw Error(ErrorCode::kInvalidStats, "average sizes must be finite and >= 0");
    }
    if (row_count > 0 && (avg_row_size <= 0.0 || avg_col_size <= 0.0)) {
      throw Error(ErrorCode::kInvalidStats, "average sizes must be > 0 for a non-empty table");
    }
  }

  // Averages with the length prefixes of variable-length columns folded in.
  double EffectiveColSize() const {
    return avg_col_size + kVarlenPrefixBytes * varlen_col_count / col_count;
  }
  double EffectiveRowSize() const {
    return avg_row_size + kVarlenPrefixBytes * varlen_col_count;
  }
  double Rows() const { return static_cast<double>(row_count); }
  double Cols() const { return static_cast<double>(col_count); }

  bool operator==(const DataStats&) const = default;
};

enum class LayoutKind { kHorizontal, kVertical, kHybrid };

inline const char* LayoutKindName(LayoutKind kind) {
  switch (kind) {
    case LayoutKind::kHorizontal: return "horizontal";
    case LayoutKind::kVertical: return "vertical";
    case LayoutKind::kHybrid: return "hybrid";
  }
  return "unknown";
}

struct LayoutGeometry {
  LayoutKind kind = LayoutKind::kHorizontal;
  double header_size = 0.0;
  double footer_size = 0.0;
  double per_task_meta = 0.0;    // re-read by every task (one task per chunk)
  double row_meta = 0.0;         // horizontal, per row
  double body_meta = 0.0;        // horizontal, whole body
  double vcol_meta = 0.0;        // vertical, per column
  double hybrid_col_meta = 0.0;  // hybrid, per column
  double rowgroup_meta = 0.0;    // hybrid, per row group
  double rowgroup_size = 0.0;    // hybrid

  void Validate() const {
    for (double v : {header_size, footer_size, per_task_meta, row_meta, body_meta, vcol_meta,
                     hybrid_col_meta, rowgroup_meta, rowgroup_size}) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kIncompleteGeometry, "geometry fields must be finite and >= 0");
      }
    }
    if (kind == LayoutKind::kHybrid && !(rowgroup_size > 0.0)) {
      throw Error(ErrorCode::kIncompleteGeometry, "hybrid geometry needs rowgroup_size > 0");
    }
  }
};

enum class OpKind { kScan, kProject, kSelect };

inline const char* OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kScan: return "scan";
    case OpKind::kProject: return "project";
    case OpKind::kSelect: return "select";
  }
  return "unknown";
}

// One downstream read of a materialized result. ref_cols and selectivity are
// optional because collected statistics may be missing them.
struct OperationProfile {
  OpKind kind = OpKind::kScan;
  std::optional<uint32_t> ref_cols;
  std::optional<double> selectivity;
  bool sorted = false;
  double frequency = 1.0;

  static OperationProfile Scan(double frequency = 1.0) {
    return {OpKind::kScan, std::nullopt, std::nullopt, false, frequency};
  }
  static OperationProfile Project(uint32_t ref_cols, double frequency = 1.0) {
    return {OpKind::kProject, ref_cols, std::nullopt, false, frequency};
  }
  static OperationProfile Select(double selectivity, bool sorted = false,
                                 double frequency = 1.0) {
    return {OpKind::kSelect, std::nullopt, selectivity, sorted, frequency};
  }

  bool Complete() const {
    switch (kind) {
      case OpKind::kScan: return true;
      case OpKind::kProject: return ref_cols.has_value();
      case OpKind::kSelect: return selectivity.has_value();
    }
    return false;
  }

  void Validate(const DataStats& stats) const {
    if (!(frequency > 0.0) || !std::isfinite(frequency)) {
      throw Error(ErrorCode::kPrecondition, "frequency must be > 0");
    }
    if (kind == OpKind::kProject) {
      if (!ref_cols) throw Error(ErrorCode::kIncompleteStats, "projection without ref_cols");
      if (*ref_cols < 1 || *ref_cols > stats.col_count) {
        throw Error(ErrorCode::kPrecondition, "ref_cols must be in [1, col_count]");
      }
    }
    if (kind == OpKind::kSelect) {
      if (!selectivity) throw Error(ErrorCode::kIncompleteStats, "selection without selectivity");
      if (!(*selectivity >= 0.0 && *selectivity <= 1.0)) {
        throw Error(ErrorCode::kPrecondition, "selectivity must be in [0,1]");
      }
    }
  }

  bool operator==(const OperationProfile&) const = default;
};

struct SizeBreakdown {
  double header = 0.0;
  double body = 0.0;
  double footer = 0.0;
  double total = 0.0;

  static SizeBreakdown Of(double header, double body, double footer) {
    return {header, body, footer, header + body + footer};
  }
};

namespace detail {

inline void RequireKind(const LayoutGeometry& geo, LayoutKind kind) {
  if (geo.kind != kind) {
    throw Error(ErrorCode::kKindMismatch, std::string("expected ") + LayoutKindName(kind) +
                                              " geometry, got " + LayoutKindName(geo.kind));
  }
}

inline void RequireOp(const OperationProfile& op, OpKind kind) {
  if (op.kind != kind) {
    throw Error(ErrorCode::kPrecondition,
                std::string("expected ") + OpKindName(kind) + " operation");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Write side: file sizes.

inline double HorizontalBodySize(const DataStats& stats, const LayoutGeometry& geo) {
  detail::RequireKind(geo, LayoutKind::kHorizontal);
  stats.Validate();
  return (stats.EffectiveRowSize() + geo.row_meta) * stats.Rows() + geo.body_meta;
}

inline double VerticalOneColSize(const DataStats& stats, const LayoutGeometry& geo) {
  detail::RequireKind(geo, LayoutKind::kVertical);
  stats.Validate();
  return stats.EffectiveColSize() * stats.Rows() + geo.vcol_meta;
}

inline double VerticalBodySize(const DataStats& stats, const LayoutGeometry& geo) {
  return VerticalOneColSize(stats, geo) * stats.Cols();
}

// Fractional; only the metadata count and the sorted-selection count round up.
inline double HybridRowGroups(const DataStats& stats, const LayoutGeometry& geo) {
  detail::RequireKind(geo, LayoutKind::kHybrid);
  geo.Validate();
  stats.Validate();
  return (stats.EffectiveColSize() * stats.Rows() + geo.hybrid_col_meta) * stats.Cols() /
         geo.rowgroup_size;
}

// Row-group metadata is written for partially filled groups too.
inline double HybridMetaSize(const DataStats& stats, const LayoutGeometry& geo) {
  return std::ceil(HybridRowGroups(stats, geo)) * geo.rowgroup_meta;
}

inline double HybridBodySize(const DataStats& stats, const LayoutGeometry& geo) {
  return HybridRowGroups(stats, geo) * geo.rowgroup_size + HybridMetaSize(stats, geo);
}

inline SizeBreakdown TotalLayoutSize(const DataStats& stats, const LayoutGeometry& geo) {
  geo.Validate();
  double body = 0.0;
  switch (geo.kind) {
    case LayoutKind::kHorizontal: body = HorizontalBodySize(stats, geo); break;
    case LayoutKind::kVertical: body = VerticalBodySize(stats, geo); break;
    case LayoutKind::kHybrid: body = HybridBodySize(stats, geo); break;
  }
  return SizeBreakdown::Of(geo.header_size, body, geo.footer_size);
}

// ---------------------------------------------------------------------------
// Read side.

// Every task re-reads the layout metadata; there is one task per used chunk.
inline double ScanSizeFor(double layout_size, const LayoutGeometry& geo,
                          const SystemProfile& sys) {
  return layout_size + UsedChunks(layout_size, sys) * geo.per_task_meta;
}

inline double ScanSize(const DataStats& stats, const LayoutGeometry& geo,
                       const SystemProfile& sys) {
  return ScanSizeFor(TotalLayoutSize(stats, geo).total, geo, sys);
}

// Transfer volume includes the metadata re-reads; seeks follow the file itself.
inline CostEstimate ScanCostFor(double layout_size, const LayoutGeometry& geo,
                                const SystemProfile& sys) {
  return MakeEstimate(UsedChunks(ScanSizeFor(layout_size, geo, sys), sys),
                      Seeks(layout_size, sys), sys, IoMode::kRead);
}

inline CostEstimate ScanCost(const DataStats& stats, const LayoutGeometry& geo,
                             const SystemProfile& sys) {
  return ScanCostFor(TotalLayoutSize(stats, geo).total, geo, sys);
}

inline double ProjectSizeVertical(const OperationProfile& op, const DataStats& stats,
                                  const LayoutGeometry& geo) {
  detail::RequireOp(op, OpKind::kProject);
  op.Validate(stats);
  return geo.header_size + geo.footer_size + VerticalOneColSize(stats, geo) * *op.ref_cols;
}

// Referenced columns need not be adjacent, so each one is sought separately.
inline CostEstimate ProjectCostVertical(const OperationProfile& op, const DataStats& stats,
                                        const LayoutGeometry& geo, const SystemProfile& sys) {
  const double size = ProjectSizeVertical(op, stats, geo);
  const uint64_t seeks = *op.ref_cols * Seeks(VerticalOneColSize(stats, geo), sys);
  return MakeEstimate(UsedChunks(size, sys), seeks, sys, IoMode::kRead);
}

inline double RowsPerRowGroup(const DataStats& stats, const LayoutGeometry& geo) {
  const double groups = HybridRowGroups(stats, geo);
  if (!(groups > 0.0)) {
    throw Error(ErrorCode::kEmptyTable, "no row groups");
  }
  return stats.Rows() / groups;
}

// Real-valued ref_cols so that column-fraction sweeps can be evaluated
// continuously.
inline double ProjectSizeHybridFor(double ref_cols, const DataStats& stats,
                                   const LayoutGeometry& geo, const SystemProfile& sys,
                                   double layout_size) {
  if (!(ref_cols >= 0.0 && ref_cols <= stats.Cols())) {
    throw Error(ErrorCode::kPrecondition, "ref_cols must be in [0, col_count]");
  }
  const double groups = HybridRowGroups(stats, geo);
  const double rows_per_group = groups > 0.0 ? stats.Rows() / groups : 0.0;
  const double ref_cols_size =
      (stats.EffectiveColSize() * rows_per_group + geo.hybrid_col_meta) * ref_cols;
  return geo.header_size + geo.footer_size + (ref_cols_size + geo.rowgroup_meta) * groups +
         UsedChunks(layout_size, sys) * HybridMetaSize(stats, geo);
}

inline double ProjectSizeHybrid(const OperationProfile& op, const DataStats& stats,
                                const LayoutGeometry& geo, const SystemProfile& sys) {
  detail::RequireOp(op, OpKind::kProject);
  op.Validate(stats);
  return ProjectSizeHybridFor(*op.ref_cols, stats, geo, sys, TotalLayoutSize(stats, geo).total);
}

// The seek term follows the whole file, not just the projected bytes.
inline CostEstimate ProjectCostHybridFor(double ref_cols, const DataStats& stats,
                                         const LayoutGeometry& geo, const SystemProfile& sys,
                                         double layout_size) {
  const double size = ProjectSizeHybridFor(ref_cols, stats, geo, sys, layout_size);
  return MakeEstimate(UsedChunks(size, sys), Seeks(layout_size, sys), sys, IoMode::kRead);
}

inline CostEstimate ProjectCostHybrid(const OperationProfile& op, const DataStats& stats,
                                      const LayoutGeometry& geo, const SystemProfile& sys) {
  detail::RequireOp(op, OpKind::kProject);
  op.Validate(stats);
  return ProjectCostHybridFor(*op.ref_cols, stats, geo, sys, TotalLayoutSize(stats, geo).total);
}

// Probability that a group of `rows_per_group` independent rows holds at
// least one row matching a predicate of selectivity `sf`. Evaluated as
// -expm1(r * log1p(-sf)) so tiny sf and huge r stay accurate.
inline double RowGroupHitProbability(double sf, double rows_per_group) {
  if (!(sf >= 0.0 && sf <= 1.0)) {
    throw Error(ErrorCode::kPrecondition, "selectivity must be in [0,1]");
  }
  if (!(rows_per_group >= 0.0)) {
    throw Error(ErrorCode::kPrecondition, "rows_per_group must be >= 0");
  }
  if (sf == 0.0 || rows_per_group == 0.0) return 0.0;
  if (sf == 1.0) return 1.0;
  return -std::expm1(rows_per_group * std::log1p(-sf));
}

inline double SelectedRowsSize(const OperationProfile& op, const DataStats& stats,
                               const LayoutGeometry& geo) {
  detail::RequireOp(op, OpKind::kSelect);
  op.Validate(stats);
  return (stats.EffectiveColSize() * *op.selectivity * stats.Rows() + geo.hybrid_col_meta) *
         stats.Cols();
}

inline double SelectedRowGroups(const OperationProfile& op, const DataStats& stats,
                                const LayoutGeometry& geo) {
  detail::RequireOp(op, OpKind::kSelect);
  detail::RequireKind(geo, LayoutKind::kHybrid);
  op.Validate(stats);
  if (op.sorted) {
    // Matching rows are stored together.
    return std::ceil(SelectedRowsSize(op, stats, geo) / geo.rowgroup_size);
  }
  const double groups = HybridRowGroups(stats, geo);
  if (!(groups > 0.0)) return 0.0;
  return groups * RowGroupHitProbability(*op.selectivity, stats.Rows() / groups);
}

inline double SelectSizeHybridFor(const OperationProfile& op, const DataStats& stats,
                                  const LayoutGeometry& geo, const SystemProfile& sys,
                                  double layout_size) {
  return geo.header_size + geo.footer_size +
         SelectedRowGroups(op, stats, geo) * geo.rowgroup_size +
         UsedChunks(layout_size, sys) * HybridMetaSize(stats, geo);
}

inline double SelectSizeHybrid(const OperationProfile& op, const DataStats& stats,
                               const LayoutGeometry& geo, const SystemProfile& sys) {
  return SelectSizeHybridFor(op, stats, geo, sys, TotalLayoutSize(stats, geo).total);
}

inline CostEstimate SelectCostHybridFor(const OperationProfile& op, const DataStats& stats,
                                        const LayoutGeometry& geo, const SystemProfile& sys,
                                        double layout_size) {
  const double size = SelectSizeHybridFor(op, stats, geo, sys, layout_size);
  return MakeEstimate(UsedChunks(size, sys), Seeks(size, sys), sys, IoMode::kRead);
}

inline CostEstimate SelectCostHybrid(const OperationProfile& op, const DataStats& stats,
                                     const LayoutGeometry& geo, const SystemProfile& sys) {
  return SelectCostHybridFor(op, stats, geo, sys, TotalLayoutSize(stats, geo).total);
}

// Only projection and selection have native access paths, and only on the
// layouts that support them; everything else is a full scan.
inline CostEstimate ReadCostFor(const OperationProfile& op, const DataStats& stats,
                                const LayoutGeometry& geo, const SystemProfile& sys,
                                double layout_size) {
  op.Validate(stats);
  if (op.kind == OpKind::kProject) {
    if (geo.kind == LayoutKind::kVertical) return ProjectCostVertical(op, stats, geo, sys);
    if (geo.kind == LayoutKind::kHybrid) {
      return ProjectCostHybridFor(*op.ref_cols, stats, geo, sys, layout_size);
    }
  }
  if (op.kind == OpKind::kSelect && geo.kind == LayoutKind::kHybrid) {
    return SelectCostHybridFor(op, stats, geo, sys, layout_size);
  }
  return ScanCostFor(layout_size, geo, sys);
}

inline CostEstimate ReadCost(const OperationProfile& op, const DataStats& stats,
                             const LayoutGeometry& geo, const SystemProfile& sys) {
  return ReadCostFor(op, stats, geo, sys, TotalLayoutSize(stats, geo).total);
}

}  // namespace fmtsel
