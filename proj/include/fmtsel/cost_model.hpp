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

// I/O cost kernel shared by every layout: chunk and seek accounting on a
// distributed file system, the write/read transfer weights, and conversion of
// the dimensionless weighted cost back to wall-clock seconds.

#include <cmath>
#include <cstdint>
#include <string>

#include "fmtsel/error.hpp"

namespace fmtsel {

// DFS and hardware constants. Defaults are the reference testbed values.
struct SystemProfile {
  int replication_factor = 3;
  double locality_probability = 0.97;
  double chunk_size = 1.28e8;         // bytes
  double disk_bandwidth = 1.3e8;      // bytes/second
  double network_bandwidth = 1.25e8;  // bytes/second
  double seek_time = 5.0e-3;          // seconds
  // Carried for sensitivity studies; not part of any cost unless
  // include_rotation is set, in which case it is charged once per seek.
  double rotation_time = 4.17e-6;
  double disk_block_size = 8.0e3;
  bool include_rotation = false;

  void Validate() const {
    if (replication_factor < 1) {
      throw Error(ErrorCode::kInvalidProfile, "replication_factor must be >= 1");
    }
    if (!(locality_probability >= 0.0 && locality_probability <= 1.0)) {
      throw Error(ErrorCode::kInvalidProfile, "locality_probability must be in [0,1]");
    }
    if (!(chunk_size > 0.0) || !std::isfinite(chunk_size)) {
      throw Error(ErrorCode::kInvalidProfile, "chunk_size must be > 0");
    }
    if (!(disk_bandwidth > 0.0) || !(network_bandwidth > 0.0) ||
        !std::isfinite(disk_bandwidth) || !std::isfinite(network_bandwidth)) {
      throw Error(ErrorCode::kInvalidProfile, "bandwidths must be > 0");
    }
    if (!(seek_time >= 0.0) || !std::isfinite(seek_time)) {
      throw Error(ErrorCode::kInvalidProfile, "seek_time must be >= 0");
    }
    if (!(rotation_time >= 0.0) || !std::isfinite(rotation_time)) {
      throw Error(ErrorCode::kInvalidProfile, "rotation_time must be >= 0");
    }
  }

  // Time charged for positioning the head at one chunk.
  double PositioningTime() const {
    return seek_time + (include_rotation ? rotation_time : 0.0);
  }

  bool operator==(const SystemProfile&) const = default;
};

struct DerivedTimes {
  double time_disk = 0.0;  // seconds to move one chunk through the disk
  double time_net = 0.0;   // seconds to move one chunk over the network
};

enum class IoMode { kRead, kWrite };

inline const char* IoModeName(IoMode mode) {
  return mode == IoMode::kRead ? "read" : "write";
}

struct CostEstimate {
  double chunks = 0.0;  // fractional, transfer term
  uint64_t seeks = 0;   // integral, positioning term
  double weighted_cost = 0.0;
  double seconds = 0.0;
  IoMode mode = IoMode::kRead;

  bool operator==(const CostEstimate&) const = default;
};

inline DerivedTimes ComputeDerivedTimes(const SystemProfile& sys) {
  sys.Validate();
  return {sys.chunk_size / sys.disk_bandwidth, sys.chunk_size / sys.network_bandwidth};
}

inline double UsedChunks(double size_bytes, const SystemProfile& sys) {
  if (!(size_bytes >= 0.0)) {
    throw Error(ErrorCode::kPrecondition, "size must be >= 0");
  }
  return size_bytes / sys.chunk_size;
}

// One seek per chunk touched, even when the last chunk is partial.
inline uint64_t Seeks(double size_bytes, const SystemProfile& sys) {
  return static_cast<uint64_t>(std::ceil(UsedChunks(size_bytes, sys)));
}

// Per-chunk transfer time for a mode: disk plus the replica pipeline on write,
// disk plus the expected remote share on read.
inline double ChunkTransferTime(const SystemProfile& sys, IoMode mode) {
  const DerivedTimes t = ComputeDerivedTimes(sys);
  if (mode == IoMode::kWrite) {
    return t.time_disk + (sys.replication_factor - 1) * t.time_net;
  }
  return t.time_disk + (1.0 - sys.locality_probability) * t.time_net;
}

inline double TransferWeight(const SystemProfile& sys, IoMode mode) {
  const double transfer = ChunkTransferTime(sys, mode);
  const double denominator = sys.PositioningTime() + transfer;
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::kDegenerateProfile, "seek plus transfer time is zero");
  }
  return transfer / denominator;
}

inline double WriteTransferWeight(const SystemProfile& sys) {
  return TransferWeight(sys, IoMode::kWrite);
}

inline double ReadTransferWeight(const SystemProfile& sys) {
  return TransferWeight(sys, IoMode::kRead);
}

inline double WeightedCost(double chunks, uint64_t seek_count, double weight) {
  return chunks * weight + static_cast<double>(seek_count) * (1.0 - weight);
}

// Builds an estimate from an already-resolved transfer volume and seek count.
inline CostEstimate MakeEstimate(double chunks, uint64_t seek_count,
                                 const SystemProfile& sys, IoMode mode) {
  CostEstimate est;
  est.mode = mode;
  est.chunks = chunks;
  est.seeks = seek_count;
  est.weighted_cost = WeightedCost(chunks, seek_count, TransferWeight(sys, mode));
  est.seconds = chunks * ChunkTransferTime(sys, mode) +
                static_cast<double>(seek_count) * sys.PositioningTime();
  return est;
}

inline CostEstimate WriteCost(double layout_size, const SystemProfile& sys) {
  return MakeEstimate(UsedChunks(layout_size, sys), Seeks(layout_size, sys), sys,
                      IoMode::kWrite);
}

// Undoes the weighting: multiplying by the weight denominator turns
// effective-chunk units back into seconds.
inline double CostToSeconds(const CostEstimate& est, const SystemProfile& sys,
                            IoMode mode) {
  if (est.mode != mode) {
    throw Error(ErrorCode::kModeMismatch,
                std::string("estimate is ") + IoModeName(est.mode) + ", asked for " +
                    IoModeName(mode));
  }
  const double denominator = sys.PositioningTime() + ChunkTransferTime(sys, mode);
  return est.weighted_cost * denominator;
}

}  // namespace fmtsel
