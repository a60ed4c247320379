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

// Ground-truth side of the validation: a Monte Carlo row-group hit estimator,
// an I/O replay simulator over explicit access plans, and the plans each
// layout implies for scan, projection and selection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fmtsel/cost_model.hpp"
#include "fmtsel/error.hpp"
#include "fmtsel/formats.hpp"
#include "fmtsel/layout_model.hpp"
#include "fmtsel/random.hpp"
#include "fmtsel/reference_writer.hpp"

namespace fmtsel {

enum class Locality { kLocal, kRemote, kStochastic };

struct AccessExtent {
  uint64_t offset = 0;
  uint64_t length = 0;
  Locality locality = Locality::kStochastic;
};

struct AccessPlan {
  IoMode mode = IoMode::kRead;
  std::vector<AccessExtent> extents;

  void Add(uint64_t offset, uint64_t length, Locality locality = Locality::kStochastic) {
    if (length > 0) extents.push_back({offset, length, locality});
  }

  uint64_t Bytes() const {
    uint64_t total = 0;
    for (const auto& e : extents) total += e.length;
    return total;
  }
};

namespace detail {

// Open-addressing set of row ids with O(inserted) clearing, reused across
// trials.
class DrawSet {
 public:
  DrawSet() { Rehash(1024); }

  // Returns false if the key was already present.
  bool Insert(uint64_t key) {
    if ((used_.size() + 1) * 2 > slots_.size()) Rehash(slots_.size() * 2);
    const uint64_t stored = key + 1;
    size_t i = SplitMix64(key) & mask_;
    while (slots_[i] != 0) {
      if (slots_[i] == stored) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = stored;
    used_.push_back(i);
    return true;
  }

  void Clear() {
    for (size_t i : used_) slots_[i] = 0;
    used_.clear();
  }

 private:
  void Rehash(size_t capacity) {
    std::vector<uint64_t> keys;
    keys.reserve(used_.size());
    for (size_t i : used_) keys.push_back(slots_[i] - 1);
    slots_.assign(capacity, 0);
    mask_ = capacity - 1;
    used_.clear();
    for (uint64_t k : keys) Insert(k);
  }

  std::vector<uint64_t> slots_;
  std::vector<size_t> used_;
  size_t mask_ = 0;
};

// Places `matches` rows uniformly without replacement among `rows` and marks
// which groups receive at least one. `group_of` maps a row to its group.
// Stops as soon as every group is hit; the remaining draws cannot change the
// outcome.
template <class GroupOf>
uint64_t SampleHitGroups(uint64_t rows, uint64_t matches, size_t group_count, GroupOf group_of,
                         Rng& rng, DrawSet& drawn, std::vector<char>& hit) {
  hit.assign(group_count, 0);
  drawn.Clear();
  if (matches >= rows) {
    std::fill(hit.begin(), hit.end(), 1);
    return group_count;
  }
  uint64_t hits = 0;
  for (uint64_t placed = 0; placed < matches && hits < group_count;) {
    const uint64_t row = rng.Below(rows);
    if (!drawn.Insert(row)) continue;
    ++placed;
    const size_t g = group_of(row);
    if (!hit[g]) {
      hit[g] = 1;
      ++hits;
    }
  }
  return hits;
}

// Rounds x to an integer whose expectation is x.
inline uint64_t StochasticRound(double x, Rng& rng) {
  const double base = std::floor(x);
  return static_cast<uint64_t>(base) + (rng.Uniform() < x - base ? 1 : 0);
}

}  // namespace detail

// Fraction of row groups holding at least one matching row, averaged over
// groups and trials. Each trial places round(SF * rows) matches uniformly
// without replacement over group_count groups of rows_per_group rows.
inline double MonteCarloRowGroupHit(uint64_t rows_per_group, uint64_t group_count, double sf,
                                    uint64_t trials, uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::kPrecondition, "trials must be >= 1");
  if (!(sf >= 0.0 && sf <= 1.0)) {
    throw Error(ErrorCode::kPrecondition, "selectivity must be in [0,1]");
  }
  if (rows_per_group == 0 || group_count == 0) return 0.0;
  if (sf == 0.0) return 0.0;
  if (sf == 1.0) return 1.0;
  const uint64_t rows = rows_per_group * group_count;
  detail::DrawSet drawn;
  std::vector<char> hit;
  double sum = 0.0;
  for (uint64_t t = 0; t < trials; ++t) {
    Rng rng(DeriveSeed(seed, t));
    const uint64_t matches = detail::StochasticRound(sf * static_cast<double>(rows), rng);
    const uint64_t hits = detail::SampleHitGroups(
        rows, matches, group_count,
        [rows_per_group](uint64_t row) { return static_cast<size_t>(row / rows_per_group); },
        rng, drawn, hit);
    sum += static_cast<double>(hits) / static_cast<double>(group_count);
  }
  return sum / static_cast<double>(trials);
}

// Whether chunk `chunk` of a file is served locally in a stochastic replay.
// Keyed by chunk index only, so different formats replayed with the same seed
// see the same placement.
inline bool ChunkIsLocal(uint64_t seed, uint64_t chunk, double p) {
  return ToUnitInterval(HashTriple(seed, chunk, 0x10ca1ULL)) < p;
}

struct ReplayStats {
  double seconds = 0.0;
  uint64_t chunks_touched = 0;
  uint64_t bytes = 0;
};

// One positioning per distinct chunk touched, disk transfer for every byte,
// network transfer for remote bytes on read and for R-1 replicas on write.
inline ReplayStats ReplayIoDetailed(const AccessPlan& plan, const SystemProfile& sys,
                                    uint64_t seed) {
  sys.Validate();
  ReplayStats out;
  if (plan.extents.empty()) return out;
  const uint64_t chunk = static_cast<uint64_t>(std::llround(sys.chunk_size));
  if (chunk == 0) throw Error(ErrorCode::kInvalidProfile, "chunk_size rounds to 0 bytes");
  uint64_t last = 0;
  for (const auto& e : plan.extents) last = std::max(last, e.offset + e.length);
  std::vector<char> touched(last / chunk + 1, 0);
  double disk_bytes = 0.0;
  double net_bytes = 0.0;
  for (const auto& e : plan.extents) {
    uint64_t pos = e.offset;
    const uint64_t end = e.offset + e.length;
    while (pos < end) {
      const uint64_t c = pos / chunk;
      const uint64_t piece = std::min(end, (c + 1) * chunk) - pos;
      if (!touched[c]) {
        touched[c] = 1;
        ++out.chunks_touched;
      }
      disk_bytes += static_cast<double>(piece);
      if (plan.mode == IoMode::kWrite) {
        net_bytes += static_cast<double>(piece) * (sys.replication_factor - 1);
      } else if (e.locality == Locality::kRemote ||
                 (e.locality == Locality::kStochastic &&
                  !ChunkIsLocal(seed, c, sys.locality_probability))) {
        net_bytes += static_cast<double>(piece);
      }
      out.bytes += piece;
      pos += piece;
    }
  }
  out.seconds = static_cast<double>(out.chunks_touched) * sys.PositioningTime() +
                disk_bytes / sys.disk_bandwidth + net_bytes / sys.network_bandwidth;
  return out;
}

inline double ReplayIo(const AccessPlan& plan, const SystemProfile& sys, uint64_t seed) {
  return ReplayIoDetailed(plan, sys, seed).seconds;
}

inline AccessPlan WritePlan(const WriteResult& file) {
  AccessPlan plan;
  plan.mode = IoMode::kWrite;
  plan.Add(0, file.stream_length, Locality::kLocal);
  return plan;
}

// ---------------------------------------------------------------------------
// Operation plans

struct SimulationOptions {
  uint32_t trials = 1;  // random column subsets / predicate placements averaged
};

struct SimulationResult {
  double seconds = 0.0;  // mean over trials
  double bytes = 0.0;    // mean bytes read
};

namespace detail {

inline std::vector<uint32_t> SampleColumns(uint32_t cols, uint32_t k, Rng& rng) {
  std::vector<uint32_t> all(cols);
  std::iota(all.begin(), all.end(), 0u);
  for (uint32_t i = 0; i < k; ++i) {
    const uint32_t j = i + static_cast<uint32_t>(rng.Below(cols - i));
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

// Every task (one per chunk of the file) re-reads the metadata sections.
inline void AddMetadataReads(AccessPlan& plan, const WriteResult& file, const LayoutKind kind,
                             const SystemProfile& sys) {
  const uint64_t tasks =
      static_cast<uint64_t>(std::ceil(static_cast<double>(file.stream_length) / sys.chunk_size));
  const uint64_t footer_offset = file.stream_length - file.footer;
  for (uint64_t t = 0; t < tasks; ++t) {
    plan.Add(0, file.header);
    if (kind != LayoutKind::kHorizontal) plan.Add(footer_offset, file.footer);
  }
}

inline void AddFullRead(AccessPlan& plan, const WriteResult& file) {
  plan.Add(0, file.stream_length);
}

}  // namespace detail

// Builds the access plan for one trial of `op` on a written file.
inline AccessPlan OperationPlan(const OperationProfile& op, const SyntheticTable& table,
                                const WriteResult& file, const FormatDescriptor& fd,
                                const SystemProfile& sys, Rng& rng) {
  const DataStats stats = table.ToStats();
  op.Validate(stats);
  AccessPlan plan;
  const LayoutKind kind = fd.kind();

  if (kind == LayoutKind::kVertical && op.kind == OpKind::kProject) {
    plan.Add(0, file.header);
    for (uint32_t c : detail::SampleColumns(table.Cols(), *op.ref_cols, rng)) {
      plan.Add(file.columns[c].offset, file.columns[c].length);
    }
    plan.Add(file.stream_length - file.footer, file.footer);
    return plan;
  }

  if (kind == LayoutKind::kHybrid && op.kind != OpKind::kScan) {
    const auto& groups = file.row_groups;
    const uint64_t footer_offset = file.stream_length - file.footer;
    plan.Add(0, file.header);
    plan.Add(footer_offset, file.footer);
    if (op.kind == OpKind::kProject) {
      const auto cols = detail::SampleColumns(table.Cols(), *op.ref_cols, rng);
      for (const auto& g : groups) {
        for (uint32_t c : cols) plan.Add(g.columns[c].extent.offset, g.columns[c].extent.length);
        const uint64_t trailer = g.extent.end() - g.columns.back().extent.end();
        plan.Add(g.columns.back().extent.end(), trailer);
      }
    } else {
      const uint64_t rows = table.row_count;
      const uint64_t matches =
          static_cast<uint64_t>(std::llround(*op.selectivity * static_cast<double>(rows)));
      std::vector<char> hit(groups.size(), 0);
      if (op.sorted) {
        // One-sided predicate on the sort column: matches form a prefix.
        if (!table.sort_key) {
          throw Error(ErrorCode::kPrecondition, "sorted selection needs a table sort key");
        }
        for (size_t g = 0; g < groups.size(); ++g) hit[g] = groups[g].first_row < matches;
      } else {
        std::vector<uint64_t> firsts;
        firsts.reserve(groups.size());
        for (const auto& g : groups) firsts.push_back(g.first_row);
        detail::DrawSet drawn;
        detail::SampleHitGroups(
            rows, matches, groups.size(),
            [&firsts](uint64_t row) {
              return static_cast<size_t>(std::upper_bound(firsts.begin(), firsts.end(), row) -
                                         firsts.begin() - 1);
            },
            rng, drawn, hit);
      }
      for (size_t g = 0; g < groups.size(); ++g) {
        if (hit[g]) plan.Add(groups[g].extent.offset, groups[g].extent.length);
      }
    }
    // Per-task re-reads beyond the first pass.
    const uint64_t tasks = static_cast<uint64_t>(
        std::ceil(static_cast<double>(file.stream_length) / sys.chunk_size));
    for (uint64_t t = 1; t < tasks; ++t) {
      plan.Add(0, file.header);
      plan.Add(footer_offset, file.footer);
    }
    return plan;
  }

  // Everything else reads the whole file.
  detail::AddFullRead(plan, file);
  detail::AddMetadataReads(plan, file, kind, sys);
  return plan;
}

inline SimulationResult SimulateOperation(const OperationProfile& op, const SyntheticTable& table,
                                          const WriteResult& file, const FormatDescriptor& fd,
                                          const SystemProfile& sys, uint64_t seed,
                                          SimulationOptions options = {}) {
  if (options.trials < 1) throw Error(ErrorCode::kPrecondition, "trials must be >= 1");
  SimulationResult out;
  for (uint32_t t = 0; t < options.trials; ++t) {
    Rng rng(DeriveSeed(seed, t));
    const AccessPlan plan = OperationPlan(op, table, file, fd, sys, rng);
    const ReplayStats r = ReplayIoDetailed(plan, sys, seed);
    out.seconds += r.seconds;
    out.bytes += static_cast<double>(r.bytes);
  }
  out.seconds /= options.trials;
  out.bytes /= options.trials;
  return out;
}

inline SimulationResult SimulateOperation(const OperationProfile& op, const SyntheticTable& table,
                                          const FormatDescriptor& fd, const SystemProfile& sys,
                                          uint64_t seed, SimulationOptions options = {}) {
  return SimulateOperation(op, table, WriteReferenceFile(table, fd), fd, sys, seed, options);
}

}  // namespace fmtsel
