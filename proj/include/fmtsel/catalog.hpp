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

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fmtsel/error.hpp"
#include "fmtsel/layout_model.hpp"
#include "fmtsel/workflow.hpp"
#include "json.hpp"

namespace fmtsel {

inline constexpr int kCatalogSchemaVersion = 1;

// What is known about one materialization candidate: its output statistics
// and the reads its consumers perform.
struct NodeStats {
  std::optional<DataStats> data;
  std::vector<OperationProfile> ops;

  bool Complete() const {
    if (!data || ops.empty()) return false;
    for (const auto& op : ops) {
      if (!op.Complete()) return false;
    }
    return true;
  }

  void Validate() const {
    try {
      if (data) data->Validate();
      for (const auto& op : ops) {
        if (!(op.frequency > 0.0)) {
          throw Error(ErrorCode::kInconsistentStats, "frequency must be > 0");
        }
        if (op.selectivity && !(*op.selectivity >= 0.0 && *op.selectivity <= 1.0)) {
          throw Error(ErrorCode::kInconsistentStats, "selectivity outside [0,1]");
        }
        if (op.ref_cols && (*op.ref_cols < 1 || (data && *op.ref_cols > data->col_count))) {
          throw Error(ErrorCode::kInconsistentStats, "ref_cols outside [1, col_count]");
        }
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInconsistentStats) throw;
      throw Error(ErrorCode::kInconsistentStats, e.what());
    }
  }

  nlohmann::json ToJson() const {
    nlohmann::json j;
    if (data) j["data"] = StatsToJson(*data);
    j["ops"] = nlohmann::json::array();
    for (const auto& op : ops) j["ops"].push_back(OpToJson(op));
    return j;
  }

  static NodeStats FromJson(const nlohmann::json& j) {
    NodeStats s;
    if (j.contains("data")) s.data = StatsFromJson(j.at("data"));
    for (const auto& jo : j.value("ops", nlohmann::json::array())) s.ops.push_back(OpFromJson(jo));
    return s;
  }

  bool operator==(const NodeStats&) const = default;
};

// Fingerprint-keyed statistics with last-writer-wins updates. Single writer,
// many readers: callers serialize mutations.
class StatsCatalog {
 public:
  void Record(const std::string& fingerprint, const NodeStats& stats) {
    stats.Validate();
    entries_[fingerprint] = stats;
    ++version_;
  }

  std::optional<NodeStats> Lookup(const std::string& fingerprint) const {
    auto it = entries_.find(fingerprint);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  size_t size() const { return entries_.size(); }
  uint64_t version() const { return version_; }
  const std::map<std::string, NodeStats>& entries() const { return entries_; }

  nlohmann::json ToJson() const {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [fp, stats] : entries_) entries[fp] = stats.ToJson();
    return {{"schema_version", kCatalogSchemaVersion}, {"version", version_}, {"entries", entries}};
  }

  static StatsCatalog FromJson(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_number() ||
        j["schema_version"].get<int>() != kCatalogSchemaVersion) {
      throw Error(ErrorCode::kSchemaVersionMismatch, "catalog schema_version is not 1");
    }
    StatsCatalog c;
    try {
      c.version_ = j.at("version").get<uint64_t>();
      for (const auto& [fp, js] : j.at("entries").items()) {
        NodeStats s = NodeStats::FromJson(js);
        s.Validate();
        c.entries_[fp] = std::move(s);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaVersionMismatch, std::string("malformed catalog: ") + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaVersionMismatch, std::string("malformed catalog: ") + e.what());
    }
    return c;
  }

  void Save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
    out << ToJson().dump(2) << '\n';
    if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
  }

  static StatsCatalog Load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kSchemaVersionMismatch, path + " is not a catalog document");
    }
    return FromJson(j);
  }

  bool operator==(const StatsCatalog&) const = default;

 private:
  std::map<std::string, NodeStats> entries_;
  uint64_t version_ = 0;
};

}  // namespace fmtsel
