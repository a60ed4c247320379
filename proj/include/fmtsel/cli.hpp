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

// Command-line front end. RunCli is the whole program minus process setup, so
// tests can drive it in-process.
//
// Exit codes: 0 ok, 1 validation failure, 2 input error, 3 unknown entity,
// 4 catalog version mismatch.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmtsel/catalog.hpp"
#include "fmtsel/config.hpp"
#include "fmtsel/crossover.hpp"
#include "fmtsel/error.hpp"
#include "fmtsel/fixtures.hpp"
#include "fmtsel/formats.hpp"
#include "fmtsel/reference_writer.hpp"
#include "fmtsel/report.hpp"
#include "fmtsel/selector.hpp"
#include "fmtsel/validation.hpp"
#include "fmtsel/workflow.hpp"
#include "json.hpp"

namespace fmtsel {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitInputError = 2,
  kExitUnknownEntity = 3,
  kExitVersionMismatch = 4,
};

inline constexpr const char* kProfileEnvVar = "FMTSEL_PROFILE";

inline int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownFormat:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kUnknownOperationKind:
      return kExitUnknownEntity;
    case ErrorCode::kSchemaVersionMismatch:
      return kExitVersionMismatch;
    default:
      return kExitInputError;
  }
}

namespace cli {

// Flags shared by every verb. Unset optionals leave the config value alone.
struct GlobalFlags {
  std::string config_path;
  std::optional<std::string> output;
  std::optional<uint64_t> seed;
  std::optional<std::string> candidates;
  std::optional<std::string> selection;
  std::optional<std::string> materialization;
  std::optional<double> amortization_reads;
};

inline std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Defaults, then the profile named by the environment (unless --config is
// given), then the --config document, then individual flags.
inline RunConfig ResolveConfig(const GlobalFlags& g) {
  RunConfig cfg;
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kProfileEnvVar); env && *env) path = env;
  }
  if (!path.empty()) ApplyConfigJson(cfg, ReadJsonFile(path));
  if (g.output) cfg.output = ParseOutputFormat(*g.output);
  if (g.seed) cfg.seed = *g.seed;
  if (g.candidates) {
    cfg.candidates = SplitList(*g.candidates);
    if (cfg.candidates.empty()) throw Error(ErrorCode::kParseError, "empty candidate list");
    for (const auto& name : cfg.candidates) FormatByName(name);
  }
  if (g.selection) cfg.selection = ParseSelectionMode(*g.selection);
  if (g.materialization) cfg.materialization = ParseMaterializationMode(*g.materialization);
  if (g.amortization_reads) {
    if (!(*g.amortization_reads >= 0.0)) {
      throw Error(ErrorCode::kParseError, "amortization_reads must be >= 0");
    }
    cfg.amortization_reads = *g.amortization_reads;
  }
  return cfg;
}

struct StatsFlags {
  std::string file;
  std::optional<uint64_t> rows;
  std::optional<uint32_t> cols;
  std::optional<double> avg_col;
  std::optional<double> avg_row;
  uint32_t varlen_cols = 0;

  bool Given() const { return !file.empty() || rows || cols || avg_col || avg_row; }

  DataStats Resolve() const {
    if (!file.empty()) return StatsFromJson(ReadJsonFile(file));
    if (!rows || !cols || !avg_col) {
      throw Error(ErrorCode::kInvalidStats, "need --rows, --cols and --avg-col (or --stats FILE)");
    }
    DataStats s;
    s.row_count = *rows;
    s.col_count = *cols;
    s.avg_col_size = *avg_col;
    s.avg_row_size = avg_row ? *avg_row : *avg_col * *cols;
    s.varlen_col_count = varlen_cols;
    s.Validate();
    return s;
  }
};

inline void AddStatsFlags(CLI::App* cmd, StatsFlags& f) {
  cmd->add_option("--stats", f.file, "statistics JSON file");
  cmd->add_option("--rows", f.rows, "row count");
  cmd->add_option("--cols", f.cols, "column count");
  cmd->add_option("--avg-col", f.avg_col, "mean column payload bytes");
  cmd->add_option("--avg-row", f.avg_row, "mean row payload bytes (default avg-col * cols)");
  cmd->add_option("--varlen-cols", f.varlen_cols, "number of variable-length columns");
}

// Uniform-width table matching `stats`, for the reference writer. The first
// varlen_col_count columns are variable length.
inline SyntheticTable TableForStats(const DataStats& s, uint64_t seed) {
  const double w = s.avg_col_size;
  if (w < 1.0 || w != std::floor(w) || s.avg_row_size != w * s.col_count) {
    throw Error(ErrorCode::kInvalidStats,
                "oracle needs an integral avg-col and avg-row == avg-col * cols");
  }
  SyntheticTable t;
  t.row_count = s.row_count;
  t.widths.assign(s.col_count, static_cast<uint32_t>(w));
  t.varlen.assign(s.col_count, false);
  for (uint32_t c = 0; c < s.varlen_col_count; ++c) t.varlen[c] = true;
  t.seed = seed;
  return t;
}

// ---------------------------------------------------------------------------

inline int EstimateSize(const RunConfig& cfg, const StatsFlags& sf, const std::string& format,
                        bool oracle, const std::string& dump, std::ostream& out) {
  const DataStats stats = sf.Resolve();
  std::vector<FormatDescriptor> formats;
  if (format.empty()) {
    formats = cfg.CandidateFormats();
  } else {
    for (const auto& name : SplitList(format)) formats.push_back(cfg.Format(name));
  }
  if (!dump.empty() && formats.size() != 1) {
    throw Error(ErrorCode::kPrecondition, "--dump needs exactly one --format");
  }

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& fd : formats) {
    const SizeBreakdown est = FormatSections(stats, fd);
    nlohmann::json row = {{"format", fd.name()}, {"estimated", SectionsToJson(est)}};
    if (oracle || !dump.empty()) {
      const SyntheticTable table = TableForStats(stats, cfg.seed);
      WriteResult actual;
      if (!dump.empty()) {
        std::ofstream file(dump, std::ios::binary | std::ios::trunc);
        if (!file) throw Error(ErrorCode::kIoError, "cannot write " + dump);
        actual = DumpReferenceFile(table, fd, file);
        if (!file) throw Error(ErrorCode::kIoError, "write failed for " + dump);
      } else {
        actual = WriteReferenceFile(table, fd);
      }
      row["actual"] = SectionsToJson(actual.Sections());
      row["error_pct"] = 100.0 * RelativeError(est.total, static_cast<double>(actual.total()));
    }
    rows.push_back(row);
  }

  switch (cfg.output) {
    case OutputFormat::kJson:
      out << nlohmann::json({{"stats", StatsToJson(stats)}, {"formats", rows}}).dump(2) << '\n';
      break;
    case OutputFormat::kCsv: {
      std::vector<std::string> header = {"format", "header", "body", "footer", "total"};
      if (oracle) {
        header.insert(header.end(), {"actual_total", "error_pct"});
      }
      out << CsvRow(header);
      for (const auto& r : rows) {
        const auto& e = r["estimated"];
        std::vector<std::string> f = {r["format"], FmtFull(e["header"]), FmtFull(e["body"]),
                                      FmtFull(e["footer"]), FmtFull(e["total"])};
        if (oracle) {
          f.push_back(FmtFull(r["actual"]["total"]));
          f.push_back(FmtFull(r["error_pct"]));
        }
        out << CsvRow(f);
      }
      break;
    }
    case OutputFormat::kText: {
      std::vector<std::string> header = {"format", "header", "body", "footer", "total"};
      if (oracle) header.insert(header.end(), {"actual", "error%"});
      TextTable t(header);
      for (const auto& r : rows) {
        const auto& e = r["estimated"];
        std::vector<std::string> f = {r["format"], Fmt6(e["header"]), Fmt6(e["body"]),
                                      Fmt6(e["footer"]), Fmt6(e["total"])};
        if (oracle) {
          f.push_back(Fmt6(r["actual"]["total"]));
          f.push_back(Fmt6(r["error_pct"]));
        }
        t.Add(f);
      }
      out << t.Render();
      break;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct Decision {
  std::string node;
  std::string fingerprint;
  std::string stats_source;  // catalog | inline | none
  FormatChoice choice;
};

inline std::vector<Decision> Decide(const Workflow& wf, const StatsCatalog* catalog,
                                    const RunConfig& cfg) {
  const auto candidates = cfg.CandidateFormats();
  std::vector<Decision> out;
  for (const auto& id : wf.SelectMaterializationNodes(cfg.materialization)) {
    Decision d;
    d.node = id;
    d.fingerprint = wf.Fingerprint(id);
    const auto ops = wf.OutgoingOps(id);
    std::optional<NodeStats> stats;
    d.stats_source = "none";
    if (catalog) stats = catalog->Lookup(d.fingerprint);
    if (stats) {
      d.stats_source = "catalog";
    } else if (wf.node(id).stats) {
      stats = NodeStats{wf.node(id).stats, ops};
      d.stats_source = "inline";
    }
    switch (cfg.selection) {
      case SelectionMode::kAuto:
        d.choice = ChooseFormat(ops, stats, candidates, cfg.system, cfg.amortization_reads);
        break;
      case SelectionMode::kRule:
        d.choice.decided_by = DecidedBy::kRule;
        d.choice.format = RuleBasedChoice(stats && !stats->ops.empty() ? stats->ops : ops,
                                          cfg.candidates);
        break;
      case SelectionMode::kCost:
        if (!stats) {
          throw Error(ErrorCode::kIncompleteStats, id + ": no statistics for cost-based choice");
        }
        d.choice = CostBasedChoice(*stats, candidates, cfg.system, cfg.amortization_reads);
        break;
    }
    out.push_back(std::move(d));
  }
  return out;
}

inline int Choose(const RunConfig& cfg, const std::string& workflow_path,
                  const std::string& catalog_path, bool record, std::ostream& out) {
  const Workflow wf = Workflow::FromJson(ReadJsonFile(workflow_path));
  std::optional<StatsCatalog> catalog;
  if (!catalog_path.empty()) {
    if (record && !std::filesystem::exists(catalog_path)) {
      catalog.emplace();
    } else {
      catalog = StatsCatalog::Load(catalog_path);
    }
  } else if (record) {
    throw Error(ErrorCode::kPrecondition, "--record needs --catalog");
  }

  const auto decisions = Decide(wf, catalog ? &*catalog : nullptr, cfg);

  size_t recorded = 0;
  if (record) {
    for (const auto& d : decisions) {
      const auto& n = wf.node(d.node);
      if (!n.stats) continue;
      catalog->Record(d.fingerprint, NodeStats{n.stats, wf.OutgoingOps(d.node)});
      ++recorded;
    }
    catalog->Save(catalog_path);
  }

  switch (cfg.output) {
    case OutputFormat::kJson: {
      nlohmann::json js = nlohmann::json::array();
      for (const auto& d : decisions) {
        nlohmann::json j = Explain(d.choice);
        j["node"] = d.node;
        j["fingerprint"] = d.fingerprint;
        j["stats"] = d.stats_source;
        js.push_back(j);
      }
      nlohmann::json doc = {{"decisions", js}};
      if (record) doc["recorded"] = recorded;
      out << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::kCsv:
      out << CsvRow({"node", "fingerprint", "format", "decided_by", "total_cost", "stats"});
      for (const auto& d : decisions) {
        out << CsvRow({d.node, d.fingerprint, d.choice.format, DecidedByName(d.choice.decided_by),
                       FmtFull(d.choice.total_cost), d.stats_source});
      }
      break;
    case OutputFormat::kText: {
      TextTable t({"node", "format", "decided_by", "total_cost", "stats", "fingerprint"});
      for (const auto& d : decisions) {
        t.Add({d.node, d.choice.format, DecidedByName(d.choice.decided_by),
               Fmt6(d.choice.total_cost), d.stats_source, d.fingerprint});
      }
      out << t.Render();
      for (const auto& d : decisions) {
        if (d.choice.rank.empty()) continue;
        out << d.node << ":";
        for (const auto& c : d.choice.rank) out << " " << c.format << "=" << Fmt6(c.total_cost);
        out << '\n';
      }
      if (record) out << "recorded " << recorded << " node(s) into " << catalog_path << '\n';
      break;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline int Validate(const RunConfig& cfg, std::ostream& out) {
  const ValidationReport report = RunValidation(cfg.seed, cfg.system);
  switch (cfg.output) {
    case OutputFormat::kJson: out << report.ToJson().dump(2) << '\n'; break;
    case OutputFormat::kCsv: out << report.ToCsv(); break;
    case OutputFormat::kText: out << report.ToText(); break;
  }
  return report.passed() ? kExitOk : kExitValidationFailed;
}

inline int Crossover(const RunConfig& cfg, const StatsFlags& sf, const std::string& hybrid,
                     const std::string& horizontal, int steps, std::ostream& out) {
  const DataStats stats = sf.Given() ? sf.Resolve() : fixtures::WideJoinStats();
  std::vector<FormatDescriptor> rows;
  for (const auto& name : SplitList(horizontal)) rows.push_back(cfg.Format(name));
  const CrossoverReport r = FindCrossover(stats, cfg.Format(hybrid), rows, cfg.system, steps);
  switch (cfg.output) {
    case OutputFormat::kJson: {
      nlohmann::json j = r.ToJson();
      j["stats"] = StatsToJson(stats);
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::kCsv: {
      std::vector<std::string> header = {"fraction", r.hybrid};
      header.insert(header.end(), r.horizontal.begin(), r.horizontal.end());
      out << CsvRow(header);
      for (const auto& p : r.curve) {
        std::vector<std::string> f = {FmtFull(p.fraction), FmtFull(p.hybrid_cost)};
        for (double c : p.horizontal_costs) f.push_back(FmtFull(c));
        out << CsvRow(f);
      }
      break;
    }
    case OutputFormat::kText: {
      out << "hybrid " << r.hybrid << " vs";
      for (const auto& h : r.horizontal) out << " " << h;
      out << '\n';
      for (const auto& p : {r.curve.front(), r.curve.back()}) {
        out << "fraction " << Fmt6(p.fraction) << ": " << r.hybrid << "=" << Fmt6(p.hybrid_cost);
        for (size_t i = 0; i < r.horizontal.size(); ++i) {
          out << " " << r.horizontal[i] << "=" << Fmt6(p.horizontal_costs[i]);
        }
        out << '\n';
      }
      if (r.crossings.empty()) out << "no crossover in (0,1)\n";
      for (double x : r.crossings) out << "crossover at fraction " << Fmt6(x) << '\n';
      break;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline void PrintCatalog(const StatsCatalog& c, OutputFormat fmt, bool detail, std::ostream& out) {
  if (fmt == OutputFormat::kJson) {
    out << (detail ? c.ToJson()
                   : nlohmann::json{{"schema_version", kCatalogSchemaVersion},
                                    {"version", c.version()},
                                    {"entries", c.size()}})
               .dump(2)
        << '\n';
    return;
  }
  if (!detail) {
    out << "schema_version " << kCatalogSchemaVersion << ", version " << c.version() << ", "
        << c.size() << " entries\n";
    return;
  }
  if (fmt == OutputFormat::kCsv) {
    out << CsvRow({"fingerprint", "rows", "cols", "avg_col_size", "avg_row_size", "ops"});
  }
  TextTable t({"fingerprint", "rows", "cols", "avg_col", "avg_row", "ops"});
  for (const auto& [fp, s] : c.entries()) {
    std::string ops;
    for (const auto& op : s.ops) {
      if (!ops.empty()) ops += ' ';
      ops += OpKindName(op.kind);
      if (op.ref_cols) ops += ":" + std::to_string(*op.ref_cols);
      if (op.selectivity) ops += ":" + Fmt6(*op.selectivity);
    }
    if (fmt == OutputFormat::kCsv) {
      out << CsvRow({fp, s.data ? std::to_string(s.data->row_count) : "",
                     s.data ? std::to_string(s.data->col_count) : "",
                     s.data ? FmtFull(s.data->avg_col_size) : "",
                     s.data ? FmtFull(s.data->avg_row_size) : "", ops});
    } else {
      t.Add({fp, s.data ? std::to_string(s.data->row_count) : "-",
             s.data ? std::to_string(s.data->col_count) : "-",
             s.data ? Fmt6(s.data->avg_col_size) : "-", s.data ? Fmt6(s.data->avg_row_size) : "-",
             ops});
    }
  }
  if (fmt == OutputFormat::kText) {
    out << "schema_version " << kCatalogSchemaVersion << ", version " << c.version() << '\n';
    out << t.Render();
  }
}

inline int WriteFixtures(const std::string& dir, std::ostream& out) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir);
  const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };

  const Workflow wf = fixtures::SalesWorkflow();
  WriteJsonFile(path("sales_workflow.json"), wf.ToJson());

  // Same DAG with statistics inline on the shared nodes, for --record.
  nlohmann::json with_stats = wf.ToJson();
  for (auto& n : with_stats["nodes"]) {
    for (size_t i = 0; i < fixtures::kSharedNodes.size(); ++i) {
      if (n["id"] == fixtures::kSharedNodes[i]) {
        n["stats"] = StatsToJson(fixtures::BundledNodeStats(i));
      }
    }
  }
  WriteJsonFile(path("sales_workflow_stats.json"), with_stats);
  fixtures::SalesCatalog().Save(path("sales_catalog.json"));
  StatsCatalog().Save(path("empty_catalog.json"));
  WriteJsonFile(path("wide_join_stats.json"), StatsToJson(fixtures::WideJoinStats()));
  out << "wrote fixtures to " << dir << '\n';
  return kExitOk;
}

}  // namespace cli

inline int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Storage format selection for materialized intermediate results", "fmtsel"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::GlobalFlags g;
  app.add_option("--config", g.config_path, "run configuration JSON (default $FMTSEL_PROFILE)");
  app.add_option("--output", g.output, "text | json | csv");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--candidates", g.candidates, "comma-separated candidate formats");
  app.add_option("--mode", g.selection, "auto | rule | cost");
  app.add_option("--materialization", g.materialization, "conservative | aggressive | both");
  app.add_option("--amortization-reads", g.amortization_reads, "read weight per write");

  cli::StatsFlags size_stats;
  std::string size_format;
  bool size_oracle = false;
  std::string size_dump;
  auto* estimate = app.add_subcommand("estimate-size", "estimated file size per section");
  cli::AddStatsFlags(estimate, size_stats);
  estimate->add_option("--format", size_format, "format name(s), default: candidates");
  estimate->add_flag("--oracle", size_oracle, "compare with the reference writer");
  estimate->add_option("--dump", size_dump, "write the reference file to this path");

  std::string wf_path;
  std::string catalog_path;
  bool record = false;
  auto* choose = app.add_subcommand("choose", "decide storage formats for a workflow");
  choose->add_option("workflow", wf_path, "workflow JSON")->required();
  choose->add_option("--catalog", catalog_path, "statistics catalog JSON");
  choose->add_flag("--record", record, "record inline node statistics into --catalog");

  auto* validate = app.add_subcommand("validate", "run the estimate-vs-oracle suites");

  cli::StatsFlags cross_stats;
  std::string hybrid = "parquet";
  std::string horizontal = "seqfile,avro";
  int steps = 200;
  auto* crossover = app.add_subcommand("crossover", "projection width where row formats win");
  cli::AddStatsFlags(crossover, cross_stats);
  crossover->add_option("--hybrid", hybrid, "hybrid format");
  crossover->add_option("--horizontal", horizontal, "comma-separated row formats");
  crossover->add_option("--steps", steps, "grid intervals over [0,1]");

  auto* catalog = app.add_subcommand("catalog", "statistics catalog maintenance");
  catalog->require_subcommand(1);
  std::string cat_path;
  bool cat_sales = false;
  auto* cat_save = catalog->add_subcommand("save", "write a new catalog");
  cat_save->add_option("path", cat_path)->required();
  cat_save->add_flag("--sales", cat_sales, "populate with the bundled sales statistics");
  auto* cat_load = catalog->add_subcommand("load", "check a catalog and print a summary");
  cat_load->add_option("path", cat_path)->required();
  auto* cat_inspect = catalog->add_subcommand("inspect", "print every catalog entry");
  cat_inspect->add_option("path", cat_path)->required();

  std::string fixtures_dir = "data";
  auto* fixtures_cmd = app.add_subcommand("fixtures", "write the bundled synthetic inputs");
  fixtures_cmd->add_option("--out", fixtures_dir, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    const RunConfig cfg = cli::ResolveConfig(g);
    if (*estimate) {
      return cli::EstimateSize(cfg, size_stats, size_format, size_oracle, size_dump, out);
    }
    if (*choose) return cli::Choose(cfg, wf_path, catalog_path, record, out);
    if (*validate) return cli::Validate(cfg, out);
    if (*crossover) return cli::Crossover(cfg, cross_stats, hybrid, horizontal, steps, out);
    if (*cat_save) {
      (cat_sales ? fixtures::SalesCatalog() : StatsCatalog()).Save(cat_path);
      out << "saved " << cat_path << '\n';
      return kExitOk;
    }
    if (*cat_load) {
      cli::PrintCatalog(StatsCatalog::Load(cat_path), cfg.output, false, out);
      return kExitOk;
    }
    if (*cat_inspect) {
      cli::PrintCatalog(StatsCatalog::Load(cat_path), cfg.output, true, out);
      return kExitOk;
    }
    if (*fixtures_cmd) return cli::WriteFixtures(fixtures_dir, out);
  } catch (const Error& e) {
    err << "fmtsel: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "fmtsel: parse-error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace fmtsel
