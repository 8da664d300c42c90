// Copyright 2026 The pipecache Authors. All Rights Reserved.
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

#include "pipecache/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "pipecache/corpus_io.hpp"
#include "pipecache/errors.hpp"
#include "pipecache/replay.hpp"
#include "pipecache/state_catalog.hpp"
#include "pipecache/strategies.hpp"
#include "pipecache/synth.hpp"

namespace pipecache {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliConfig {
  std::vector<std::string> corpus_paths;
  std::string strategy = "pt";
  bool adaptive = false;
  bool exclude_current = false;
  bool beneficial_only = false;
  bool lenient = false;
  std::string emit;
  std::string out;
  std::string index_path;
  std::string catalog_path;
  std::string workflow_path;
  GenSpec gen;
};

ReplayOptions replay_options(const CliConfig& cfg) {
  ReplayOptions options;
  options.scope = cfg.exclude_current ? ConfidenceScope::kExclusive
                                      : ConfidenceScope::kInclusive;
  options.beneficial_only = cfg.beneficial_only;
  return options;
}

Corpus load_all(const CliConfig& cfg) {
  ParseOptions parse{cfg.lenient};
  Corpus corpus;
  for (const auto& p : cfg.corpus_paths) {
    Corpus part = load_corpus(p, parse);
    std::move(part.traces.begin(), part.traces.end(),
              std::back_inserter(corpus.traces));
  }
  validate(corpus);
  return corpus;
}

void write_text_file(const fs::path& file, const std::string& text) {
  std::ofstream f(file, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + file.string() + "'");
  f << text;
  f.flush();
  if (!f) throw IoError("write failed for '" + file.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create directory '" + dir.string() + "'");
  }
}

// Writes reports per --emit: to files under --out when given, else stdout.
void emit_reports(const CliConfig& cfg, const std::vector<ReplayReport>& reports,
                  std::ostream& out) {
  const std::string emit = cfg.emit.empty() ? "csv" : cfg.emit;
  const bool want_json = emit == "json" || emit == "both";
  const bool want_csv = emit == "csv" || emit == "both";
  if (cfg.out.empty()) {
    if (want_json) out << reports_to_json(reports).dump(2) << '\n';
    if (want_csv) out << reports_to_csv(reports);
    return;
  }
  ensure_dir(cfg.out);
  if (want_json) write_json_file(fs::path(cfg.out) / "report.json", reports_to_json(reports));
  if (want_csv) write_text_file(fs::path(cfg.out) / "report.csv", reports_to_csv(reports));
  out << reports_to_table(reports);
}

int cmd_ingest(const CliConfig& cfg, std::ostream& out) {
  const Corpus corpus = load_all(cfg);
  const Strategy strategy = parse_strategy(cfg.strategy, cfg.adaptive);
  const ReplayResult result = replay_with_state(corpus, strategy, replay_options(cfg));
  ensure_dir(cfg.out);
  write_json_file(fs::path(cfg.out) / "index.json", result.index.to_json());
  write_json_file(fs::path(cfg.out) / "catalog.json", result.catalog.to_json());
  out << "ingested " << result.index.pipeline_count() << " pipelines ("
      << result.index.datasets().size() << " datasets); " << strategy.name()
      << " stored " << result.catalog.size() << " states\n"
      << "wrote " << (fs::path(cfg.out) / "index.json").string() << " and "
      << (fs::path(cfg.out) / "catalog.json").string() << '\n';
  return kExitOk;
}

std::string show_confidence(const std::optional<double>& c) {
  if (!c) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *c);
  return buf;
}

json confidence_json(const std::optional<double>& c) {
  return c ? json(*c) : json(nullptr);
}

int cmd_recommend(const CliConfig& cfg, std::ostream& out) {
  HistoryIndex index = HistoryIndex::from_json(read_json_file(cfg.index_path));
  if (cfg.adaptive && !is_adaptive(index.mode())) {
    throw ValidationError(
        "--adaptive requires an index snapshot built with --adaptive or "
        "--strategy pt-adaptive");
  }
  const KeyMode mode = index.mode();
  Strategy strategy = parse_strategy(cfg.strategy, is_adaptive(mode));
  if (strategy.mode() != mode) {
    throw ValidationError("strategy " + strategy.name() +
                          " does not match the snapshot key mode");
  }
  Catalog catalog(mode);
  if (!cfg.catalog_path.empty()) {
    catalog = Catalog::from_json(read_json_file(cfg.catalog_path));
    if (catalog.mode() != mode) {
      throw ValidationError("catalog and index snapshots use different key modes");
    }
  }
  const WorkflowTrace trace =
      load_trace_file(cfg.workflow_path, ParseOptions{cfg.lenient}).trace;

  const auto candidates = catalog.reuse_candidates(trace, index);

  StoreDecision decision;
  HistoryIndex after = index;
  after.ingest(trace);
  switch (strategy.kind) {
    case StrategyKind::kPt:
      decision = cfg.exclude_current
                     ? decide_pt(trace, index, ConfidenceScope::kExclusive)
                     : decide_pt(trace, after, ConfidenceScope::kInclusive);
      break;
    case StrategyKind::kTspar: decision = decide_tspar(trace, index); break;
    case StrategyKind::kTsar: decision = decide_tsar(trace, mode); break;
    case StrategyKind::kTsfr: decision = decide_tsfr(trace, mode); break;
  }
  if (cfg.beneficial_only) decision = beneficial_only(trace, std::move(decision));

  const HistoryIndex& scored = cfg.exclude_current ? index : after;
  const auto rules = derive_rules(trace, mode);

  if (cfg.emit == "json") {
    json doc;
    doc["workflow_id"] = trace.workflow_id;
    doc["dataset"] = trace.dataset.value;
    doc["strategy"] = strategy.name();
    json cands = json::array();
    for (const auto& c : candidates) {
      json e = state_key_to_json(c.key);
      e["matched_len"] = c.matched_len;
      e["confidence"] = confidence_json(c.confidence);
      e["load_time_s"] = c.load_time_s;
      e["stored_at_pipeline"] = c.stored_at_pipeline;
      cands.push_back(std::move(e));
    }
    doc["candidates"] = std::move(cands);
    json rule_rows = json::array();
    for (const auto& r : rules) {
      json e = state_key_to_json(r);
      e["support"] = scored.support(r);
      e["confidence"] = confidence_json(scored.confidence(r));
      rule_rows.push_back(std::move(e));
    }
    doc["rules"] = std::move(rule_rows);
    json store = json::array();
    for (const auto& k : decision.keys_to_store) store.push_back(state_key_to_json(k));
    doc["store"] = std::move(store);
    out << doc.dump(2) << '\n';
    return kExitOk;
  }

  out << "workflow " << trace.workflow_id << " on dataset " << trace.dataset.value
      << " (" << trace.length() << " modules)\n";
  out << "reuse candidates:\n";
  if (candidates.empty()) out << "  (none)\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    char line[160];
    std::snprintf(line, sizeof line, "  %zu. skip %zu module(s), confidence %s, load %.1f s: ",
                  i + 1, c.matched_len, show_confidence(c.confidence).c_str(),
                  c.load_time_s);
    out << line << to_string(c.key) << '\n';
  }
  out << "rules:\n";
  for (const auto& r : rules) {
    out << "  " << to_string(r) << "  support " << scored.support(r)
        << ", confidence " << show_confidence(scored.confidence(r)) << '\n';
  }
  out << "store recommendation (" << strategy.name() << "):";
  if (decision.empty()) out << " (nothing)";
  for (const auto& k : decision.keys_to_store) out << ' ' << to_string(k);
  out << '\n';
  return kExitOk;
}

int cmd_replay(const CliConfig& cfg, std::ostream& out) {
  const Corpus corpus = load_all(cfg);
  const Strategy strategy = parse_strategy(cfg.strategy, cfg.adaptive);
  emit_reports(cfg, {replay(corpus, strategy, replay_options(cfg))}, out);
  return kExitOk;
}

int cmd_compare(const CliConfig& cfg, std::ostream& out) {
  const Corpus corpus = load_all(cfg);
  emit_reports(cfg, compare(corpus, replay_options(cfg)), out);
  return kExitOk;
}

int cmd_gen(const CliConfig& cfg, std::ostream& out) {
  const Corpus corpus = generate(cfg.gen);
  save_corpus(corpus, cfg.out);
  out << "wrote " << corpus.size() << " traces to " << cfg.out << '\n';
  return kExitOk;
}

int cmd_import(const CliConfig& cfg, std::ostream& out) {
  Corpus corpus;
  for (const auto& p : cfg.corpus_paths) corpus.traces.push_back(import_galaxy_subset(p));
  validate(corpus);
  save_corpus(corpus, cfg.out);
  out << "imported " << corpus.size() << " workflow(s) into " << cfg.out
      << " (timings default to 0)\n";
  return kExitOk;
}

void add_replay_flags(CLI::App* sub, CliConfig& cfg) {
  sub->add_flag("--adaptive", cfg.adaptive,
                "Qualify rules and states with module config fingerprints");
  sub->add_flag("--exclude-current", cfg.exclude_current,
                "Score PT confidences on previous pipelines only");
  sub->add_flag("--beneficial-only", cfg.beneficial_only,
                "Skip storing states whose exec+store time does not exceed load time");
  sub->add_flag("--lenient", cfg.lenient, "Ignore unknown fields in trace files");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Recommends which intermediate workflow results to store, and "
               "replays execution histories to compare storage strategies."};
  app.name("pipecache");
  app.require_subcommand(1);

  const std::vector<std::string> strategies{"pt", "pt-adaptive", "tsar", "tspar", "tsfr"};

  auto* ingest = app.add_subcommand("ingest", "Build index and catalog snapshots from a corpus");
  ingest->add_option("paths", cfg.corpus_paths, "Trace directories or files")->required();
  ingest->add_option("-o,--out", cfg.out, "Snapshot directory")->required();
  ingest->add_option("--strategy", cfg.strategy, "Strategy that fills the catalog")
      ->check(CLI::IsMember(strategies));
  add_replay_flags(ingest, cfg);

  auto* recommend = app.add_subcommand("recommend", "Reuse candidates and store recommendation for one workflow");
  recommend->add_option("--index", cfg.index_path, "Index snapshot (index.json)")->required();
  recommend->add_option("--catalog", cfg.catalog_path, "Catalog snapshot (catalog.json)");
  recommend->add_option("-w,--workflow", cfg.workflow_path, "Workflow trace file")->required();
  recommend->add_option("--strategy", cfg.strategy, "Store decision strategy")
      ->check(CLI::IsMember(strategies));
  recommend->add_option("--emit", cfg.emit, "Output format")->check(CLI::IsMember({"text", "json"}));
  add_replay_flags(recommend, cfg);

  auto* replay_cmd = app.add_subcommand("replay", "Replay a corpus under one strategy");
  replay_cmd->add_option("corpus", cfg.corpus_paths, "Trace directories or files")->required();
  replay_cmd->add_option("--strategy", cfg.strategy, "Storage strategy")
      ->check(CLI::IsMember(strategies));
  replay_cmd->add_option("--emit", cfg.emit, "Report format")
      ->envname("PIPECACHE_EMIT")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  replay_cmd->add_option("-o,--out", cfg.out, "Report directory (stdout if omitted)");
  add_replay_flags(replay_cmd, cfg);

  auto* compare_cmd = app.add_subcommand("compare", "Replay a corpus under all five strategies");
  compare_cmd->add_option("corpus", cfg.corpus_paths, "Trace directories or files")->required();
  compare_cmd->add_option("--emit", cfg.emit, "Report format")
      ->envname("PIPECACHE_EMIT")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  compare_cmd->add_option("-o,--out", cfg.out, "Report directory (stdout if omitted)");
  compare_cmd->add_flag("--exclude-current", cfg.exclude_current,
                        "Score PT confidences on previous pipelines only");
  compare_cmd->add_flag("--beneficial-only", cfg.beneficial_only,
                        "Skip storing states whose exec+store time does not exceed load time");
  compare_cmd->add_flag("--lenient", cfg.lenient, "Ignore unknown fields in trace files");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic corpus");
  gen->add_option("--seed", cfg.gen.seed, "RNG seed");
  gen->add_option("--pipelines", cfg.gen.n_pipelines, "Number of pipelines");
  gen->add_option("--datasets", cfg.gen.n_datasets, "Number of distinct datasets");
  gen->add_option("--vocab", cfg.gen.module_vocab_size, "Module vocabulary size");
  gen->add_option("--max-len", cfg.gen.max_len, "Maximum pipeline length");
  gen->add_option("--repeat-bias", cfg.gen.repeat_bias, "P(replaying a historical prefix)");
  gen->add_option("--config-variation", cfg.gen.config_variation, "P(non-default module config)");
  gen->add_option("--exec-min", cfg.gen.exec.min_s);
  gen->add_option("--exec-max", cfg.gen.exec.max_s);
  gen->add_option("--store-min", cfg.gen.store.min_s);
  gen->add_option("--store-max", cfg.gen.store.max_s);
  gen->add_option("--load-min", cfg.gen.load.min_s);
  gen->add_option("--load-max", cfg.gen.load.max_s);
  gen->add_option("-o,--out", cfg.out, "Output directory")->required();

  auto* import = app.add_subcommand("import-galaxy", "Convert Galaxy workflow files to canonical traces");
  import->add_option("files", cfg.corpus_paths, "Galaxy .ga files")->required();
  import->add_option("-o,--out", cfg.out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(cfg, out);
    if (*recommend) return cmd_recommend(cfg, out);
    if (*replay_cmd) return cmd_replay(cfg, out);
    if (*compare_cmd) return cmd_compare(cfg, out);
    if (*gen) return cmd_gen(cfg, out);
    if (*import) return cmd_import(cfg, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace pipecache
