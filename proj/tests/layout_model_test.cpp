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

#include "fmtsel/layout_model.hpp"

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

LayoutGeometry Hybrid(double col_meta = 16, double rg_meta = 0) {
  LayoutGeometry g;
  g.kind = LayoutKind::kHybrid;
  g.hybrid_col_meta = col_meta;
  g.rowgroup_meta = rg_meta;
  g.rowgroup_size = 1.28e8;
  return g;
}

LayoutGeometry Vertical(double col_meta = 16) {
  LayoutGeometry g;
  g.kind = LayoutKind::kVertical;
  g.vcol_meta = col_meta;
  return g;
}

LayoutGeometry Horizontal(double row_meta = 8) {
  LayoutGeometry g;
  g.row_meta = row_meta;
  return g;
}

TEST(HorizontalBody, Sizes) {
  DataStats s = Uniform(1000000, 10, 10);
  EXPECT_DOUBLE_EQ(HorizontalBodySize(s, Horizontal(8)), 1.08e8);
  LayoutGeometry g = Horizontal(0);
  EXPECT_DOUBLE_EQ(HorizontalBodySize(s, g), 1e8);
  g.body_meta = 77;
  s.row_count = 0;
  EXPECT_DOUBLE_EQ(HorizontalBodySize(s, g), 77);
}

TEST(HorizontalBody, RejectsOtherKinds) {
  try {
    HorizontalBodySize(Uniform(1, 1, 1), Vertical());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKindMismatch);
  }
}

TEST(VerticalBody, OneColumnAndAll) {
  DataStats s = Uniform(1000000, 10, 8);
  EXPECT_DOUBLE_EQ(VerticalOneColSize(s, Vertical()), 8000016);
  EXPECT_DOUBLE_EQ(VerticalBodySize(s, Vertical()), 8.000016e7);
  s.col_count = 1;
  s.avg_row_size = 8;
  EXPECT_DOUBLE_EQ(VerticalBodySize(s, Vertical()), VerticalOneColSize(s, Vertical()));
  s.row_count = 0;
  EXPECT_DOUBLE_EQ(VerticalOneColSize(s, Vertical()), 16);
}

TEST(VerticalBody, VarlenAddsPrefix) {
  DataStats s = Uniform(1000000, 1, 8);
  s.varlen_col_count = 1;
  EXPECT_DOUBLE_EQ(VerticalOneColSize(s, Vertical()), 12000016);
}

TEST(VerticalBody, ZeroColumnsRejected) {
  DataStats s = Uniform(10, 1, 8);
  s.col_count = 0;
  try {
    VerticalBodySize(s, Vertical());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidStats);
  }
}

TEST(HybridGroups, Count) {
  const DataStats s = Uniform(1000000, 16, 8);
  EXPECT_NEAR(HybridRowGroups(s, Hybrid()), 1.000002, 1e-9);
  EXPECT_DOUBLE_EQ(HybridRowGroups(Uniform(0, 16, 8), Hybrid(0)), 0.0);
  EXPECT_DOUBLE_EQ(HybridRowGroups(Uniform(2000000, 16, 8), Hybrid(0)),
                   2 * HybridRowGroups(s, Hybrid(0)));
}

TEST(HybridGroups, MetaRoundsGroupsUp) {
  EXPECT_DOUBLE_EQ(HybridMetaSize(Uniform(1000000, 16, 8), Hybrid(16, 100)), 200);
  EXPECT_DOUBLE_EQ(HybridMetaSize(Uniform(0, 16, 8), Hybrid(0, 100)), 0);
  // 3 groups exactly.
  EXPECT_DOUBLE_EQ(HybridMetaSize(Uniform(3000000, 16, 8), Hybrid(0, 50)), 150);
}

TEST(HybridGroups, Body) {
  const DataStats s = Uniform(1000000, 16, 12);
  EXPECT_DOUBLE_EQ(HybridRowGroups(s, Hybrid(0, 100)), 1.5);
  EXPECT_DOUBLE_EQ(HybridBodySize(s, Hybrid(0, 100)), 1.92e8 + 200);
  EXPECT_DOUBLE_EQ(HybridBodySize(Uniform(0, 4, 4), Hybrid(0, 0)), 0);
  EXPECT_GE(HybridBodySize(s, Hybrid(16, 24)), 12.0 * 1e6 * 16);
}

TEST(TotalSize, SumsSections) {
  LayoutGeometry g = Horizontal(8);
  g.header_size = 30;
  const SizeBreakdown b = TotalLayoutSize(Uniform(1000000, 10, 10), g);
  EXPECT_DOUBLE_EQ(b.body, 1.08e8);
  EXPECT_DOUBLE_EQ(b.total, 108000030);
  EXPECT_DOUBLE_EQ(b.total, b.header + b.body + b.footer);
  EXPECT_DOUBLE_EQ(TotalLayoutSize(Uniform(0, 1, 1), Horizontal(0)).total, 0);
}

TEST(Scan, SizeAddsPerTaskMeta) {
  const SystemProfile sys;
  LayoutGeometry g = Horizontal();
  EXPECT_DOUBLE_EQ(ScanSizeFor(1.28e8, g, sys), 1.28e8);
  g.per_task_meta = 1000;
  EXPECT_DOUBLE_EQ(ScanSizeFor(2.56e8, g, sys), 2.56e8 + 2000);
  EXPECT_GT(ScanSizeFor(1e6, g, sys), 1e6);
}

TEST(Scan, Cost) {
  const SystemProfile sys;
  const LayoutGeometry g = Horizontal();
  EXPECT_NEAR(ScanCostFor(1.28e8, g, sys).weighted_cost, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(ScanCostFor(0, g, sys).weighted_cost, 0.0);
  EXPECT_DOUBLE_EQ(ScanCostFor(8 * 1.28e8, g, sys).weighted_cost,
                   2 * ScanCostFor(4 * 1.28e8, g, sys).weighted_cost);
}

TEST(ReadCostTest, HorizontalProjectionIsScan) {
  const SystemProfile sys;
  const DataStats s = Uniform(5000000, 20, 10);
  const LayoutGeometry g = Horizontal();
  EXPECT_EQ(ReadCost(OperationProfile::Project(3), s, g, sys), ScanCost(s, g, sys));
  EXPECT_EQ(ReadCost(OperationProfile::Select(0.1), s, g, sys), ScanCost(s, g, sys));
}

TEST(ReadCostTest, VerticalSelectionIsScan) {
  const SystemProfile sys;
  const DataStats s = Uniform(5000000, 20, 10);
  EXPECT_EQ(ReadCost(OperationProfile::Select(0.5), s, Vertical(), sys),
            ScanCost(s, Vertical(), sys));
}

TEST(ReadCostTest, HybridProjectionMonotone) {
  const SystemProfile sys;
  const DataStats s = Uniform(50000000, 16, 8);
  EXPECT_GE(ReadCost(OperationProfile::Project(16), s, Hybrid(), sys).weighted_cost,
            ReadCost(OperationProfile::Project(1), s, Hybrid(), sys).weighted_cost);
}

TEST(VerticalProjection, Size) {
  LayoutGeometry g = Vertical(0);
  g.header_size = 50;
  g.footer_size = 50;
  const DataStats s = Uniform(1000000, 10, 8);
  EXPECT_DOUBLE_EQ(ProjectSizeVertical(OperationProfile::Project(5), s, g), 40000100);
  EXPECT_DOUBLE_EQ(ProjectSizeVertical(OperationProfile::Project(10), s, g) - 100,
                   VerticalBodySize(s, g));
  EXPECT_THROW(ProjectSizeVertical(OperationProfile::Project(0), s, g), Error);
}

TEST(VerticalProjection, SeeksPerColumn) {
  const SystemProfile sys;
  const DataStats s = Uniform(1000000, 10, 8);
  EXPECT_EQ(ProjectCostVertical(OperationProfile::Project(5), s, Vertical(), sys).seeks, 5u);
  const CostEstimate one = ProjectCostVertical(OperationProfile::Project(1), s, Vertical(), sys);
  EXPECT_LT(one.chunks, 1.0);
  EXPECT_EQ(one.seeks, 1u);
  double prev = 0;
  for (uint32_t r = 1; r <= 10; ++r) {
    const double c =
        ProjectCostVertical(OperationProfile::Project(r), s, Vertical(), sys).weighted_cost;
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(RowGroups, RowsPerGroup) {
  // 4 groups of 16 x 8 B x 250000 rows.
  EXPECT_DOUBLE_EQ(RowsPerRowGroup(Uniform(4000000, 16, 8), Hybrid(0)), 1e6);
  EXPECT_NEAR(RowsPerRowGroup(Uniform(1000000, 16, 8), Hybrid()), 1e6, 10);
  LayoutGeometry g = Hybrid(0);
  g.rowgroup_size = 8 * 16 * 250000.0;
  EXPECT_DOUBLE_EQ(RowsPerRowGroup(Uniform(1000000, 16, 8), g), 2.5e5);
  g.rowgroup_size = 8 * 16 * 1e6;
  EXPECT_DOUBLE_EQ(RowsPerRowGroup(Uniform(1000000, 16, 8), g), 1e6);
  EXPECT_THROW(RowsPerRowGroup(Uniform(0, 16, 8), Hybrid(0)), Error);
}

TEST(HybridProjection, FullWidthMatchesScan) {
  const SystemProfile sys;
  const DataStats s = Uniform(30000000, 16, 8);
  const LayoutGeometry g = Hybrid(0, 0);
  EXPECT_NEAR(ProjectSizeHybrid(OperationProfile::Project(16), s, g, sys), ScanSize(s, g, sys),
              1e-6 * ScanSize(s, g, sys));
  EXPECT_NEAR(ProjectCostHybrid(OperationProfile::Project(16), s, g, sys).weighted_cost,
              ScanCost(s, g, sys).weighted_cost, 1e-9);
}

TEST(HybridProjection, OneColumnOfSixteen) {
  const SystemProfile sys;
  const DataStats s = Uniform(30000000, 16, 8);
  const LayoutGeometry g = Hybrid(0, 0);
  EXPECT_NEAR(ProjectSizeHybrid(OperationProfile::Project(1), s, g, sys),
              HybridBodySize(s, g) / 16, 1.0);
}

TEST(HybridProjection, EmptyTableReadsOnlyMetadata) {
  const SystemProfile sys;
  LayoutGeometry g = Hybrid(0, 0);
  g.header_size = 4;
  g.footer_size = 100;
  g.per_task_meta = 104;
  EXPECT_DOUBLE_EQ(ProjectSizeHybridFor(3, Uniform(0, 16, 8), g, sys, 104), 104);
}

TEST(HybridProjection, HalfTheColumns) {
  const SystemProfile sys;
  const DataStats s = Uniform(40000000, 16, 8);
  const LayoutGeometry g = Hybrid(0, 0);
  const CostEstimate full = ProjectCostHybrid(OperationProfile::Project(16), s, g, sys);
  const CostEstimate half = ProjectCostHybrid(OperationProfile::Project(8), s, g, sys);
  EXPECT_NEAR(half.chunks, full.chunks / 2, 1e-12);
  EXPECT_EQ(half.seeks, full.seeks);
}

TEST(HitProbability, Boundaries) {
  EXPECT_DOUBLE_EQ(RowGroupHitProbability(0, 1e6), 0);
  EXPECT_DOUBLE_EQ(RowGroupHitProbability(1, 1), 1);
  EXPECT_NEAR(RowGroupHitProbability(1e-5, 1e5), 0.6321, 1e-4);
  EXPECT_THROW(RowGroupHitProbability(1.1, 10), Error);
}

TEST(Selection, SelectedRowsSize) {
  const DataStats s = Uniform(1000000, 16, 8);
  EXPECT_DOUBLE_EQ(SelectedRowsSize(OperationProfile::Select(0.19), s, Hybrid()), 24320256);
  EXPECT_DOUBLE_EQ(SelectedRowsSize(OperationProfile::Select(1), s, Hybrid()),
                   HybridRowGroups(s, Hybrid()) * 1.28e8);
  EXPECT_DOUBLE_EQ(SelectedRowsSize(OperationProfile::Select(0), s, Hybrid(0)), 0);
}

TEST(Selection, SelectedGroups) {
  const DataStats s = Uniform(4000000, 16, 8);
  const LayoutGeometry g = Hybrid(16);
  EXPECT_DOUBLE_EQ(SelectedRowGroups(OperationProfile::Select(1, true), s, g),
                   std::ceil(HybridRowGroups(s, g)));
  EXPECT_DOUBLE_EQ(SelectedRowGroups(OperationProfile::Select(1), s, g), HybridRowGroups(s, g));
  LayoutGeometry four = Hybrid(0);
  four.rowgroup_size = 8 * 16 * 250000.0;
  EXPECT_NEAR(SelectedRowGroups(OperationProfile::Select(0.19), Uniform(1000000, 16, 8), four), 4,
              1e-9);
}

TEST(Selection, SizeBoundaries) {
  const SystemProfile sys;
  const DataStats s = Uniform(30000000, 16, 8);
  LayoutGeometry g = Hybrid(0, 0);
  EXPECT_NEAR(SelectSizeHybrid(OperationProfile::Select(1), s, g, sys), ScanSize(s, g, sys), 1.0);
  g.header_size = 4;
  g.footer_size = 60;
  EXPECT_DOUBLE_EQ(SelectSizeHybrid(OperationProfile::Select(0), s, g, sys), 64);
}

TEST(Selection, SortedReadsLess) {
  const SystemProfile sys;
  const DataStats s = Uniform(100000000, 16, 8);
  LayoutGeometry g = Hybrid(16, 24);
  g.rowgroup_size = 8 * 16 * 1e6;  // 100 groups
  EXPECT_LT(SelectSizeHybrid(OperationProfile::Select(0.01, true), s, g, sys),
            SelectSizeHybrid(OperationProfile::Select(0.01), s, g, sys));
}

TEST(Selection, CostMonotoneAndBounded) {
  const SystemProfile sys;
  const DataStats s = Uniform(30000000, 16, 8);
  const LayoutGeometry g = Hybrid(16, 24);
  EXPECT_LE(SelectCostHybrid(OperationProfile::Select(0), Uniform(30000000, 16, 8), Hybrid(0, 0),
                             sys)
                .weighted_cost,
            1.0);
  double prev = 0;
  for (double sf : {0.0, 1e-8, 1e-7, 1e-6, 1e-4, 0.01, 0.2, 0.7, 1.0}) {
    const double c = SelectCostHybrid(OperationProfile::Select(sf), s, g, sys).weighted_cost;
    EXPECT_GE(c, prev) << sf;
    prev = c;
  }
  const double scan = ScanCost(s, g, sys).weighted_cost;
  EXPECT_NEAR(prev, scan, 0.05 * scan);
}

}  // namespace
}  // namespace fmtsel
