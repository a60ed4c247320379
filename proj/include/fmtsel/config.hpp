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

// Run configuration document:
//
//   {
//     "system":  { "replication_factor": 3, "seek_time": 0.005, ... },
//     "formats": { "parquet": { "page": 1048576 } },
//     "candidates": ["seqfile", "avro", "parquet"],
//     "selection": "auto",          // auto | rule | cost
//     "materialization": "both",    // conservative | aggressive | both
//     "amortization_reads": 1,
//     "output": "text",             // text | json | csv
//     "seed": 42
//   }
//
// Every key is optional; absent keys keep their defaults.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fmtsel/cost_model.hpp"
#include "fmtsel/error.hpp"
#include "fmtsel/formats.hpp"
#include "fmtsel/workflow.hpp"
#include "json.hpp"

namespace fmtsel {

enum class SelectionMode { kAuto, kRule, kCost };
enum class OutputFormat { kText, kJson, kCsv };

inline SelectionMode ParseSelectionMode(const std::string& s) {
  if (s == "auto") return SelectionMode::kAuto;
  if (s == "rule") return SelectionMode::kRule;
  if (s == "cost") return SelectionMode::kCost;
  throw Error(ErrorCode::kParseError, "unknown selection mode '" + s + "'");
}

inline OutputFormat ParseOutputFormat(const std::string& s) {
  if (s == "text") return OutputFormat::kText;
  if (s == "json") return OutputFormat::kJson;
  if (s == "csv") return OutputFormat::kCsv;
  throw Error(ErrorCode::kParseError, "unknown output format '" + s + "'");
}

struct RunConfig {
  SystemProfile system;
  std::map<std::string, std::map<std::string, double>> format_overrides;
  std::vector<std::string> candidates = {"seqfile", "avro", "parquet"};
  SelectionMode selection = SelectionMode::kAuto;
  MaterializationMode materialization = MaterializationMode::kBoth;
  double amortization_reads = 1.0;
  OutputFormat output = OutputFormat::kText;
  uint64_t seed = 42;

  FormatDescriptor Format(const std::string& name) const {
    FormatDescriptor fd = FormatByName(name);
    auto it = format_overrides.find(name);
    if (it != format_overrides.end()) {
      for (const auto& [key, value] : it->second) fd.Set(key, value);
    }
    return fd;
  }

  std::vector<FormatDescriptor> CandidateFormats() const {
    std::vector<FormatDescriptor> out;
    for (const auto& name : candidates) out.push_back(Format(name));
    return out;
  }
};

inline void ApplySystemJson(SystemProfile& sys, const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "replication_factor") sys.replication_factor = value.get<int>();
    else if (key == "locality_probability") sys.locality_probability = value.get<double>();
    else if (key == "chunk_size") sys.chunk_size = value.get<double>();
    else if (key == "disk_bandwidth") sys.disk_bandwidth = value.get<double>();
    else if (key == "network_bandwidth") sys.network_bandwidth = value.get<double>();
    else if (key == "seek_time") sys.seek_time = value.get<double>();
    else if (key == "rotation_time") sys.rotation_time = value.get<double>();
    else if (key == "disk_block_size") sys.disk_block_size = value.get<double>();
    else if (key == "include_rotation") sys.include_rotation = value.get<bool>();
    else throw Error(ErrorCode::kInvalidProfile, "unknown system key '" + key + "'");
  }
  sys.Validate();
}

inline nlohmann::json SystemToJson(const SystemProfile& sys) {
  return {{"replication_factor", sys.replication_factor},
          {"locality_probability", sys.locality_probability},
          {"chunk_size", sys.chunk_size},
          {"disk_bandwidth", sys.disk_bandwidth},
          {"network_bandwidth", sys.network_bandwidth},
          {"seek_time", sys.seek_time},
          {"rotation_time", sys.rotation_time},
          {"disk_block_size", sys.disk_block_size},
          {"include_rotation", sys.include_rotation}};
}

// Layers `doc` over `cfg`.
inline void ApplyConfigJson(RunConfig& cfg, const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorCode::kParseError, "config must be an object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "system") {
        ApplySystemJson(cfg.system, value);
      } else if (key == "formats") {
        for (const auto& [name, consts] : value.items()) {
          FormatDescriptor probe = FormatByName(name);
          for (const auto& [k, v] : consts.items()) {
            probe.Set(k, v.get<double>());
            cfg.format_overrides[name][k] = v.get<double>();
          }
        }
      } else if (key == "candidates") {
        cfg.candidates = value.get<std::vector<std::string>>();
        for (const auto& name : cfg.candidates) FormatByName(name);
      } else if (key == "selection") {
        cfg.selection = ParseSelectionMode(value.get<std::string>());
      } else if (key == "materialization") {
        cfg.materialization = ParseMaterializationMode(value.get<std::string>());
      } else if (key == "amortization_reads") {
        cfg.amortization_reads = value.get<double>();
        if (!(cfg.amortization_reads >= 0.0)) {
          throw Error(ErrorCode::kParseError, "amortization_reads must be >= 0");
        }
      } else if (key == "output") {
        cfg.output = ParseOutputFormat(value.get<std::string>());
      } else if (key == "seed") {
        cfg.seed = value.get<uint64_t>();
      } else {
        throw Error(ErrorCode::kParseError, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad config: ") + e.what());
  }
}

inline nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
}

inline void WriteJsonFile(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

inline RunConfig LoadRunConfig(const std::string& path) {
  RunConfig cfg;
  ApplyConfigJson(cfg, ReadJsonFile(path));
  return cfg;
}

}  // namespace fmtsel
