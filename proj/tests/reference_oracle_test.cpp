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

#include <sstream>

#include "fmtsel/formats.hpp"
#include "fmtsel/reference_writer.hpp"
#include "fmtsel/simulation.hpp"

namespace fmtsel {
namespace {

SyntheticTable Table(uint64_t rows, std::vector<uint32_t> widths, uint64_t seed = 1) {
  SyntheticTable t;
  t.row_count = rows;
  t.widths = std::move(widths);
  t.seed = seed;
  return t;
}

TEST(Writer, SeqFileByteCount) {
  const WriteResult r = WriteReferenceFile(Table(40, {10, 10, 10, 10}), SeqFileFormat());
  EXPECT_EQ(r.body, 2016u);
  EXPECT_EQ(r.total(), 2046u);
  EXPECT_EQ(r.sync_markers, 1u);
}

TEST(Writer, AvroHeaderOnly) {
  const WriteResult r = WriteReferenceFile(Table(0, std::vector<uint32_t>(10, 4)), AvroFormat());
  EXPECT_EQ(r.total(), 325u);
  EXPECT_EQ(r.blocks, 0u);
}

TEST(Writer, DumpMatchesCount) {
  SyntheticTable t = Table(3000, {4, 12, 7, 9});
  t.varlen = {false, true, false, true};
  for (const auto& fd : {SeqFileFormat(), AvroFormat(), ParquetFormat(), VerticalFormat()}) {
    std::ostringstream out;
    const WriteResult dumped = DumpReferenceFile(t, fd, out);
    EXPECT_EQ(dumped, WriteReferenceFile(t, fd)) << fd.name();
    EXPECT_EQ(out.str().size(), dumped.total()) << fd.name();
  }
}

TEST(Writer, EstimatesWithinFivePercent) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    SyntheticTable t;
    t.row_count = 1000 + rng.Below(200000);
    const uint32_t cols = 2 + static_cast<uint32_t>(rng.Below(20));
    for (uint32_t c = 0; c < cols; ++c) {
      t.widths.push_back(2 + static_cast<uint32_t>(rng.Below(14)));
      t.varlen.push_back(rng.Below(3) == 0);
    }
    t.seed = i;
    const DataStats s = t.ToStats();
    for (const auto& fd : {SeqFileFormat(), AvroFormat(), ParquetFormat()}) {
      const double est = FormatSections(s, fd).total;
      const double act = static_cast<double>(WriteReferenceFile(t, fd).total());
      EXPECT_NEAR(est / act, 1.0, 0.05) << fd.name() << " rows=" << t.row_count;
    }
  }
}

TEST(Writer, Deterministic) {
  SyntheticTable t = Table(5000, {3, 9, 27});
  t.varlen = {true, true, false};
  EXPECT_EQ(WriteReferenceFile(t, ParquetFormat()), WriteReferenceFile(t, ParquetFormat()));
  SyntheticTable other = t;
  other.seed = 2;
  EXPECT_NE(WriteReferenceFile(t, AvroFormat()).body, WriteReferenceFile(other, AvroFormat()).body);
}

TEST(Writer, RejectsBadTables) {
  EXPECT_THROW(WriteReferenceFile(Table(1, {}), AvroFormat()), Error);
  EXPECT_THROW(WriteReferenceFile(Table(1, {0}), AvroFormat()), Error);
  FormatDescriptor odd("orc", LayoutKind::kHybrid, {});
  try {
    WriteReferenceFile(Table(1, {1}), odd);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedFormat);
  }
}

TEST(MonteCarlo, Boundaries) {
  EXPECT_EQ(MonteCarloRowGroupHit(1000, 8, 0.0, 100, 1), 0.0);
  EXPECT_EQ(MonteCarloRowGroupHit(1000, 8, 1.0, 100, 1), 1.0);
}

TEST(MonteCarlo, AgreesWithClosedForm) {
  const double mc = MonteCarloRowGroupHit(100000, 64, 1e-5, 100000, 42);
  EXPECT_NEAR(mc, 0.632, 0.01);
  EXPECT_NEAR(mc, RowGroupHitProbability(1e-5, 1e5), 0.01);
}

TEST(MonteCarlo, SeedDeterminism) {
  EXPECT_EQ(MonteCarloRowGroupHit(1000, 16, 1e-3, 2000, 9),
            MonteCarloRowGroupHit(1000, 16, 1e-3, 2000, 9));
}

TEST(Replay, SingleLocalChunk) {
  AccessPlan plan;
  plan.Add(0, 128000000, Locality::kLocal);
  EXPECT_NEAR(ReplayIo(plan, SystemProfile{}, 1), 0.9896, 1e-4);
  EXPECT_EQ(ReplayIo(AccessPlan{}, SystemProfile{}, 1), 0.0);
}

TEST(Replay, WriteMatchesCostModel) {
  const SystemProfile sys;
  WriteResult file;
  file.stream_length = 192000000;
  const double replay = ReplayIo(WritePlan(file), sys, 3);
  EXPECT_NEAR(replay, 4.559, 1e-3);
  EXPECT_NEAR(replay, CostToSeconds(WriteCost(1.92e8, sys), sys, IoMode::kWrite), 1e-6);
}

TEST(Replay, RemoteCostsMore) {
  AccessPlan local;
  local.Add(0, 1000, Locality::kLocal);
  AccessPlan remote;
  remote.Add(0, 1000, Locality::kRemote);
  EXPECT_LT(ReplayIo(local, SystemProfile{}, 1), ReplayIo(remote, SystemProfile{}, 1));
}

TEST(Simulate, RowFormatProjectionIsScan) {
  const SystemProfile sys;
  const SyntheticTable t = Table(200000, std::vector<uint32_t>(12, 8));
  for (const auto& fd : {SeqFileFormat(), AvroFormat()}) {
    EXPECT_DOUBLE_EQ(SimulateOperation(OperationProfile::Project(3), t, fd, sys, 5).seconds,
                     SimulateOperation(OperationProfile::Scan(), t, fd, sys, 5).seconds);
  }
}

TEST(Simulate, HybridSelectApproachesScan) {
  const SystemProfile sys;
  const SyntheticTable t = Table(400000, std::vector<uint32_t>(12, 8));
  const FormatDescriptor pq = ParquetFormat();
  const double scan = SimulateOperation(OperationProfile::Scan(), t, pq, sys, 5).seconds;
  const double sel = SimulateOperation(OperationProfile::Select(0.999), t, pq, sys, 5).seconds;
  EXPECT_NEAR(sel, scan, 0.02 * scan);
  EXPECT_LT(SimulateOperation(OperationProfile::Project(2), t, pq, sys, 5).seconds, scan);
}

TEST(Simulate, SortedSelectNeedsSortKey) {
  const SyntheticTable t = Table(1000, {4, 4});
  EXPECT_THROW(SimulateOperation(OperationProfile::Select(0.1, true), t, ParquetFormat(),
                                 SystemProfile{}, 1),
               Error);
}

}  // namespace
}  // namespace fmtsel
