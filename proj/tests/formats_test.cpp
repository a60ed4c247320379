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

#include "fmtsel/formats.hpp"
#include "fmtsel/reference_writer.hpp"

namespace fmtsel {
namespace {

DataStats Uniform(uint64_t rows, uint32_t cols, double col) {
  DataStats s;
  s.row_count = rows;
  s.col_count = cols;
  s.avg_col_size = col;
  s.avg_row_size = col * cols;
  return s;
}

TEST(Descriptor, LookupAndOverride) {
  FormatDescriptor fd = ParquetFormat();
  EXPECT_DOUBLE_EQ(fd.Get("row_group"), 1.28e8);
  fd.Set("page", 2e6);
  EXPECT_DOUBLE_EQ(fd.Get("page"), 2e6);
  EXPECT_THROW(fd.Set("pgae", 1), Error);
  EXPECT_THROW(fd.Set("page", 0), Error);
  EXPECT_THROW(fd.Get("nope"), Error);
}

TEST(Descriptor, ByName) {
  EXPECT_EQ(FormatByName("avro"), AvroFormat());
  EXPECT_EQ(FormatByName("vertical").kind(), LayoutKind::kVertical);
  try {
    FormatByName("orc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFormat);
  }
  EXPECT_EQ(BundledFormats().size(), 3u);
  EXPECT_GT(FormatRichness("parquet"), FormatRichness("avro"));
  EXPECT_GT(FormatRichness("avro"), FormatRichness("seqfile"));
  EXPECT_GT(FormatRichness("seqfile"), FormatRichness("vertical"));
}

TEST(SeqFile, RowAndSync) {
  const FormatDescriptor fd = SeqFileFormat();
  const DataStats s = Uniform(40, 4, 10);
  EXPECT_DOUBLE_EQ(SeqFileRowSize(s, fd), 50);
  const SizeBreakdown b = SeqFileSections(s, fd);
  EXPECT_DOUBLE_EQ(b.body, 2016);
  EXPECT_DOUBLE_EQ(b.total, 2046);
  const SizeBreakdown empty = SeqFileSections(Uniform(0, 4, 10), fd);
  EXPECT_DOUBLE_EQ(empty.body, 0);
  EXPECT_DOUBLE_EQ(empty.total, 30);
}

TEST(Avro, HeaderAndBlocks) {
  const FormatDescriptor fd = AvroFormat();
  EXPECT_DOUBLE_EQ(AvroHeaderSize(Uniform(0, 10, 1), fd), 325);
  const SizeBreakdown empty = AvroSections(Uniform(0, 10, 1), fd);
  EXPECT_DOUBLE_EQ(empty.body, 0);
  EXPECT_DOUBLE_EQ(empty.total, 325);
  DataStats s = Uniform(40, 4, 23);  // 92 B rows
  EXPECT_DOUBLE_EQ(AvroSections(s, fd).body, 4024);
}

TEST(Parquet, EmptyTable) {
  const FormatDescriptor fd = ParquetFormat();
  const SizeBreakdown b = ParquetSections(Uniform(0, 7, 4), fd);
  EXPECT_DOUBLE_EQ(b.body, 0);
  EXPECT_DOUBLE_EQ(b.footer, 4 + 30 * 7 + 4 + 4);
  EXPECT_DOUBLE_EQ(b.total, b.header + b.footer);
}

TEST(Parquet, FooterCountsGroupAndPageStats) {
  const FormatDescriptor fd = ParquetFormat();
  const DataStats s = Uniform(1000000, 16, 8);
  const ParquetShape shape = ParquetShapeOf(s, fd);
  EXPECT_NEAR(shape.row_groups, 1.000002, 1e-9);
  EXPECT_DOUBLE_EQ(ParquetFooterSize(s, fd), 4 + 30 * 16 + 4 + 4 +
                                                 shape.row_groups * 40 *
                                                     (1 + shape.pages_per_group));
}

TEST(Parquet, TinyTableNearWriter) {
  // One row group, well under one page per column.
  SyntheticTable t;
  t.row_count = 1000;
  t.widths = {4, 8, 8};
  const DataStats s = t.ToStats();
  const WriteResult file = WriteReferenceFile(t, ParquetFormat());
  ASSERT_EQ(file.row_groups.size(), 1u);
  ASSERT_EQ(file.pages, 3u);
  const double est = ParquetSections(s, ParquetFormat()).total;
  const double act = static_cast<double>(file.total());
  EXPECT_NEAR(est / act, 1.0, 0.05);
}

TEST(Geometry, Mapping) {
  const DataStats s = Uniform(1000, 10, 10);
  const LayoutGeometry seq = AsGeometry(SeqFileFormat(), s);
  EXPECT_EQ(seq.kind, LayoutKind::kHorizontal);
  EXPECT_DOUBLE_EQ(seq.footer_size, 0);
  const LayoutGeometry pq = AsGeometry(ParquetFormat(), s);
  EXPECT_EQ(pq.kind, LayoutKind::kHybrid);
  EXPECT_DOUBLE_EQ(pq.rowgroup_size, 1.28e8);
  const LayoutGeometry avro = AsGeometry(AvroFormat(), s);
  EXPECT_EQ(avro.kind, LayoutKind::kHorizontal);
  EXPECT_DOUBLE_EQ(avro.row_meta, 8);
}

TEST(Geometry, GenericModelAgreesWithFormatSizes) {
  // The generic body formulas, fed the mapped geometry, give the same file
  // sizes as the format-specific accounting (up to row-group meta rounding).
  const DataStats s = Uniform(3000000, 12, 9);
  for (const auto& fd : {SeqFileFormat(), AvroFormat(), VerticalFormat()}) {
    EXPECT_NEAR(TotalLayoutSize(s, AsGeometry(fd, s)).total, FormatSections(s, fd).total, 1e-6)
        << fd.name();
  }
}

TEST(FormatCosts, ProjectionOnRowFormatsIsScan) {
  const SystemProfile sys;
  const DataStats s = Uniform(20000000, 25, 10);
  for (const auto& fd : {SeqFileFormat(), AvroFormat()}) {
    EXPECT_EQ(FormatReadCost(OperationProfile::Project(5), s, fd, sys),
              FormatReadCost(OperationProfile::Scan(), s, fd, sys));
  }
  EXPECT_LT(FormatReadCost(OperationProfile::Project(5), s, ParquetFormat(), sys).weighted_cost,
            FormatReadCost(OperationProfile::Scan(), s, ParquetFormat(), sys).weighted_cost);
}

TEST(FormatCosts, WriteUsesSectionTotal) {
  const SystemProfile sys;
  const DataStats s = Uniform(20000000, 25, 10);
  EXPECT_EQ(FormatWriteCost(s, AvroFormat(), sys),
            WriteCost(FormatSections(s, AvroFormat()).total, sys));
}

}  // namespace
}  // namespace fmtsel
