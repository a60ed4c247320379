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

// Concrete file formats: SequenceFile and Avro (horizontal), Parquet (hybrid)
// and a synthetic column-per-run vertical format. Each descriptor is a bag of
// named byte constants; the *Sections functions turn statistics into exact
// header/body/footer sizes and AsGeometry maps a format onto the generic
// layout variables.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fmtsel/cost_model.hpp"
#include "fmtsel/error.hpp"
#include "fmtsel/layout_model.hpp"

namespace fmtsel {

class FormatDescriptor {
 public:
  FormatDescriptor(std::string name, LayoutKind kind, std::map<std::string, double> constants)
      : name_(std::move(name)), kind_(kind), constants_(std::move(constants)) {
    Validate();
  }

  const std::string& name() const { return name_; }
  LayoutKind kind() const { return kind_; }
  const std::map<std::string, double>& constants() const { return constants_; }

  double Get(std::string_view key) const {
    auto it = constants_.find(std::string(key));
    if (it == constants_.end()) {
      throw Error(ErrorCode::kIncompleteGeometry,
                  name_ + " has no constant '" + std::string(key) + "'");
    }
    return it->second;
  }

  // Only existing keys may be overridden; a typo should not silently add a
  // constant nobody reads.
  void Set(std::string_view key, double value) {
    auto it = constants_.find(std::string(key));
    if (it == constants_.end()) {
      throw Error(ErrorCode::kInvalidProfile,
                  name_ + " has no constant '" + std::string(key) + "'");
    }
    it->second = value;
    Validate();
  }

  bool operator==(const FormatDescriptor&) const = default;

 private:
  void Validate() const {
    for (const auto& [key, value] : constants_) {
      if (!(value >= 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::kInvalidProfile, name_ + "." + key + " must be finite and >= 0");
      }
    }
    if (name_ == "seqfile" && !(constants_.at("sync_block") > 0.0)) {
      throw Error(ErrorCode::kInvalidProfile, "seqfile.sync_block must be > 0");
    }
    if (name_ == "avro" && !(constants_.at("block") > 0.0)) {
      throw Error(ErrorCode::kInvalidProfile, "avro.block must be > 0");
    }
    if (name_ == "parquet" &&
        !(constants_.at("row_group") > 0.0 && constants_.at("page") > 0.0)) {
      throw Error(ErrorCode::kInvalidProfile, "parquet row_group and page must be > 0");
    }
  }

  std::string name_;
  LayoutKind kind_;
  std::map<std::string, double> constants_;
};

inline FormatDescriptor SeqFileFormat() {
  return FormatDescriptor("seqfile", LayoutKind::kHorizontal,
                          {{"header", 30},
                           {"record_length", 4},
                           {"key_length", 4},
                           {"col_separator", 1},
                           {"sync_marker", 16},
                           {"sync_block", 2000},
                           {"footer", 0}});
}

inline FormatDescriptor AvroFormat() {
  return FormatDescriptor("avro", LayoutKind::kHorizontal,
                          {{"version", 5},
                           {"codec", 4},
                           {"sync_marker", 16},
                           {"col_schema", 30},
                           {"block", 4000},
                           {"row_meta", 8},
                           {"block_meta", 8},
                           {"footer", 0}});
}

inline FormatDescriptor ParquetFormat() {
  return FormatDescriptor("parquet", LayoutKind::kHybrid,
                          {{"header", 4},
                           {"definition_level", 4},
                           {"repetition_level", 4},
                           {"row_counter", 8},
                           {"sync_marker", 16},
                           {"version", 4},
                           {"col_schema", 30},
                           {"col_stats_meta", 40},
                           {"magic", 4},
                           {"footer_length", 4},
                           {"row_group", 1.28e8},
                           {"page", 1.05e6}});
}

// Not a real format: a header, one separated run per column, a footer.
inline FormatDescriptor VerticalFormat() {
  return FormatDescriptor("vertical", LayoutKind::kVertical,
                          {{"header", 16}, {"footer", 16}, {"col_separator", 16}});
}

inline FormatDescriptor FormatByName(std::string_view name) {
  if (name == "seqfile") return SeqFileFormat();
  if (name == "avro") return AvroFormat();
  if (name == "parquet") return ParquetFormat();
  if (name == "vertical") return VerticalFormat();
  throw Error(ErrorCode::kUnknownFormat, "unknown format '" + std::string(name) + "'");
}

inline std::vector<FormatDescriptor> BundledFormats() {
  return {SeqFileFormat(), AvroFormat(), ParquetFormat()};
}

// Higher is richer (more native access paths). Used as a tie-break.
inline int FormatRichness(std::string_view name) {
  if (name == "parquet") return 3;
  if (name == "avro") return 2;
  if (name == "seqfile") return 1;
  return 0;
}

namespace detail {

inline void RequireFormat(const FormatDescriptor& fd, std::string_view name) {
  if (fd.name() != name) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "expected " + std::string(name) + " descriptor, got " + fd.name());
  }
}

inline double SeqFileSeparators(const DataStats& stats) {
  return std::max(stats.Cols() - 2.0, 0.0);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SequenceFile

inline double SeqFileRowSize(const DataStats& stats, const FormatDescriptor& fd) {
  detail::RequireFormat(fd, "seqfile");
  stats.Validate();
  return fd.Get("record_length") + fd.Get("key_length") +
         stats.EffectiveColSize() * stats.Cols() +
         fd.Get("col_separator") * detail::SeqFileSeparators(stats);
}

inline double SeqFileSyncOverhead(const DataStats& stats, const FormatDescriptor& fd) {
  const double total_rows = SeqFileRowSize(stats, fd) * stats.Rows();
  return std::ceil(total_rows / fd.Get("sync_block")) * fd.Get("sync_marker");
}

inline SizeBreakdown SeqFileSections(const DataStats& stats, const FormatDescriptor& fd) {
  const double rows = SeqFileRowSize(stats, fd) * stats.Rows();
  return SizeBreakdown::Of(fd.Get("header"), rows + SeqFileSyncOverhead(stats, fd),
                           fd.Get("footer"));
}

// ---------------------------------------------------------------------------
// Avro

inline double AvroHeaderSize(const DataStats& stats, const FormatDescriptor& fd) {
  detail::RequireFormat(fd, "avro");
  return fd.Get("version") + stats.Cols() * fd.Get("col_schema") + fd.Get("codec") +
         fd.Get("sync_marker");
}

inline double AvroBlockOverhead(const DataStats& stats, const FormatDescriptor& fd) {
  detail::RequireFormat(fd, "avro");
  stats.Validate();
  const double total_rows = (stats.EffectiveRowSize() + fd.Get("row_meta")) * stats.Rows();
  return (fd.Get("block_meta") + fd.Get("sync_marker")) *
         std::ceil(total_rows / fd.Get("block"));
}

inline SizeBreakdown AvroSections(const DataStats& stats, const FormatDescriptor& fd) {
  const double header = AvroHeaderSize(stats, fd);
  const double rows = (stats.EffectiveRowSize() + fd.Get("row_meta")) * stats.Rows();
  return SizeBreakdown::Of(header, rows + AvroBlockOverhead(stats, fd), fd.Get("footer"));
}

// ---------------------------------------------------------------------------
// Parquet

struct ParquetShape {
  double row_groups = 0.0;      // fractional
  double rows_per_group = 0.0;  // fractional
  double pages_per_group = 0.0; // fractional, all columns together
};

inline ParquetShape ParquetShapeOf(const DataStats& stats, const FormatDescriptor& fd) {
  detail::RequireFormat(fd, "parquet");
  stats.Validate();
  ParquetShape shape;
  if (stats.row_count == 0) return shape;
  const double col = stats.EffectiveColSize();
  shape.row_groups =
      (col * stats.Rows() + fd.Get("sync_marker")) * stats.Cols() / fd.Get("row_group");
  shape.rows_per_group = stats.Rows() / shape.row_groups;
  shape.pages_per_group =
      (col * shape.rows_per_group + fd.Get("sync_marker")) * stats.Cols() / fd.Get("page");
  return shape;
}

inline double ParquetFooterSize(const DataStats& stats, const FormatDescriptor& fd) {
  const ParquetShape shape = ParquetShapeOf(stats, fd);
  return fd.Get("version") + fd.Get("col_schema") * stats.Cols() + fd.Get("magic") +
         fd.Get("footer_length") +
         shape.row_groups * fd.Get("col_stats_meta") * (1.0 + shape.pages_per_group);
}

inline SizeBreakdown ParquetSections(const DataStats& stats, const FormatDescriptor& fd) {
  const ParquetShape shape = ParquetShapeOf(stats, fd);
  const double page_bundle =
      (fd.Get("definition_level") + fd.Get("repetition_level") + fd.Get("page")) *
      shape.pages_per_group;
  const double body =
      (page_bundle + fd.Get("row_counter") + fd.Get("sync_marker")) * shape.row_groups;
  return SizeBreakdown::Of(fd.Get("header"), body, ParquetFooterSize(stats, fd));
}

// ---------------------------------------------------------------------------
// Synthetic vertical

inline SizeBreakdown VerticalSections(const DataStats& stats, const FormatDescriptor& fd) {
  detail::RequireFormat(fd, "vertical");
  stats.Validate();
  const double one_col = stats.EffectiveColSize() * stats.Rows() + fd.Get("col_separator");
  return SizeBreakdown::Of(fd.Get("header"), one_col * stats.Cols(), fd.Get("footer"));
}

// ---------------------------------------------------------------------------

inline SizeBreakdown FormatSections(const DataStats& stats, const FormatDescriptor& fd) {
  if (fd.name() == "seqfile") return SeqFileSections(stats, fd);
  if (fd.name() == "avro") return AvroSections(stats, fd);
  if (fd.name() == "parquet") return ParquetSections(stats, fd);
  if (fd.name() == "vertical") return VerticalSections(stats, fd);
  throw Error(ErrorCode::kUnknownFormat, "unknown format '" + fd.name() + "'");
}

// The mapping needs statistics: several format metadata terms depend on the
// column count or on the row volume.
inline LayoutGeometry AsGeometry(const FormatDescriptor& fd, const DataStats& stats) {
  LayoutGeometry geo;
  geo.kind = fd.kind();
  if (fd.name() == "seqfile") {
    geo.header_size = fd.Get("header");
    geo.footer_size = fd.Get("footer");
    geo.row_meta = fd.Get("record_length") + fd.Get("key_length") +
                   fd.Get("col_separator") * detail::SeqFileSeparators(stats);
    geo.body_meta = SeqFileSyncOverhead(stats, fd);
    geo.per_task_meta = geo.header_size;
  } else if (fd.name() == "avro") {
    geo.header_size = AvroHeaderSize(stats, fd);
    geo.footer_size = fd.Get("footer");
    geo.row_meta = fd.Get("row_meta");
    geo.body_meta = AvroBlockOverhead(stats, fd);
    geo.per_task_meta = geo.header_size;
  } else if (fd.name() == "parquet") {
    geo.header_size = fd.Get("header");
    geo.footer_size = ParquetFooterSize(stats, fd);
    geo.hybrid_col_meta = fd.Get("sync_marker");
    geo.rowgroup_meta = fd.Get("row_counter") + fd.Get("sync_marker");
    geo.rowgroup_size = fd.Get("row_group");
    geo.per_task_meta = geo.footer_size + geo.header_size;
  } else if (fd.name() == "vertical") {
    geo.header_size = fd.Get("header");
    geo.footer_size = fd.Get("footer");
    geo.vcol_meta = fd.Get("col_separator");
    geo.per_task_meta = geo.header_size + geo.footer_size;
  } else {
    throw Error(ErrorCode::kUnknownFormat, "unknown format '" + fd.name() + "'");
  }
  return geo;
}

// ---------------------------------------------------------------------------
// Format-level costs. Sizes come from the exact section totals; the geometry
// only supplies the access-path structure.

inline CostEstimate FormatWriteCost(const DataStats& stats, const FormatDescriptor& fd,
                                    const SystemProfile& sys) {
  return WriteCost(FormatSections(stats, fd).total, sys);
}

inline CostEstimate FormatReadCost(const OperationProfile& op, const DataStats& stats,
                                   const FormatDescriptor& fd, const SystemProfile& sys) {
  return ReadCostFor(op, stats, AsGeometry(fd, stats), sys, FormatSections(stats, fd).total);
}

// Estimated bytes an operation reads, metadata re-reads included.
inline double FormatReadSize(const OperationProfile& op, const DataStats& stats,
                             const FormatDescriptor& fd, const SystemProfile& sys) {
  op.Validate(stats);
  const LayoutGeometry geo = AsGeometry(fd, stats);
  const double layout = FormatSections(stats, fd).total;
  if (op.kind == OpKind::kProject) {
    if (geo.kind == LayoutKind::kVertical) return ProjectSizeVertical(op, stats, geo);
    if (geo.kind == LayoutKind::kHybrid) {
      return ProjectSizeHybridFor(*op.ref_cols, stats, geo, sys, layout);
    }
  }
  if (op.kind == OpKind::kSelect && geo.kind == LayoutKind::kHybrid) {
    return SelectSizeHybridFor(op, stats, geo, sys, layout);
  }
  return ScanSizeFor(layout, geo, sys);
}

}  // namespace fmtsel
