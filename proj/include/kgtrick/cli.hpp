// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgtrick/config.hpp"
#include "kgtrick/dataset_builder.hpp"
#include "kgtrick/ensembler.hpp"
#include "kgtrick/evaluator.hpp"
#include "kgtrick/genbackend.hpp"
#include "kgtrick/kgstore.hpp"
#include "kgtrick/linker.hpp"
#include "kgtrick/remote_backend.hpp"
#include "kgtrick/snapshot.hpp"

namespace kgtrick::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kBadInput = 2 };

struct Flags {
  std::string config;
  std::vector<std::string> languages;
  std::optional<std::uint64_t> seed;
  std::optional<double> kgc_fraction;
  std::optional<int> num_candidates;
  std::string backend;
  std::vector<std::string> directions;
  std::vector<std::string> triplets;
  std::vector<std::string> lexical;
  std::string benchmark;
  std::string snapshot;
  std::string output_dir;
  std::string output;
  std::string kgc_test;
  std::string test_qids;
  std::string external_scores;
  std::string vote_mode;
  std::string task;
  std::string lang;
  std::string text;
  std::string input;
};

inline Config resolve_config(const Flags& f) {
  Config cfg;
  if (!f.config.empty()) cfg = Config::load(f.config);
  cfg.apply_environment();
  if (!f.languages.empty()) cfg.languages = LanguageSet(f.languages);
  if (f.seed) cfg.seed = *f.seed;
  if (f.kgc_fraction) cfg.kgc_fraction = *f.kgc_fraction;
  if (f.num_candidates) cfg.num_candidates = *f.num_candidates;
  if (!f.backend.empty()) cfg.backend = f.backend;
  if (!f.directions.empty()) cfg.directions = f.directions;
  if (!f.vote_mode.empty()) cfg.vote_mode = f.vote_mode;
  if (!f.triplets.empty()) cfg.paths.triplets.assign(f.triplets.begin(), f.triplets.end());
  if (!f.lexical.empty()) cfg.paths.lexical.assign(f.lexical.begin(), f.lexical.end());
  if (!f.benchmark.empty()) cfg.paths.benchmark = f.benchmark;
  if (!f.snapshot.empty()) cfg.paths.snapshot = f.snapshot;
  if (!f.output_dir.empty()) cfg.paths.output_dir = f.output_dir;
  if (!f.kgc_test.empty()) cfg.paths.kgc_test = f.kgc_test;
  if (!f.test_qids.empty()) cfg.paths.test_qids = f.test_qids;
  if (!f.external_scores.empty()) cfg.paths.external_scores = f.external_scores;
  cfg.validate();
  return cfg;
}

inline fs::path output_dir(const Config& cfg) {
  fs::path dir = cfg.paths.output_dir.value_or(fs::path("."));
  fs::create_directories(dir);
  return dir;
}

inline void write_json_file(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

inline fs::path manifest_path(const fs::path& p) { return fs::path(p.string() + ".manifest.json"); }

inline int cmd_ingest(const Config& cfg, std::ostream& out) {
  if (cfg.paths.triplets.empty()) throw ConfigError("no triplet files configured");
  for (const auto& p : cfg.paths.triplets) require_file(p, "triplet file");
  for (const auto& p : cfg.paths.lexical) require_file(p, "lexical file");
  if (cfg.paths.benchmark) require_file(cfg.paths.benchmark, "benchmark file");
  if (!cfg.paths.snapshot) throw ConfigError("snapshot output path is not configured");

  GraphBuilder builder(cfg.languages);
  IngestReport trip_total, lex_total, bench_report;
  auto fold = [](IngestReport& into, const IngestReport& r) {
    into.added += r.added;
    into.skipped += r.skipped;
    into.duplicates += r.duplicates;
    into.aliases_dropped += r.aliases_dropped;
    for (const auto& w : r.warnings) into.warnings.push_back(w);
  };
  for (const auto& p : cfg.paths.triplets) fold(trip_total, builder.ingest_triplets(p));
  for (const auto& p : cfg.paths.lexical) fold(lex_total, builder.ingest_lexical(p));
  if (cfg.paths.benchmark) builder.apply_tiers(read_benchmark(*cfg.paths.benchmark, cfg.languages, &bench_report));
  const KnowledgeGraph graph = std::move(builder).freeze();
  if (cfg.paths.snapshot->has_parent_path()) fs::create_directories(cfg.paths.snapshot->parent_path());
  write_snapshot(graph, *cfg.paths.snapshot);

  nlohmann::ordered_json manifest;
  manifest["triplets"] = graph.triplet_count();
  manifest["entities"] = graph.entity_count();
  manifest["relations"] = graph.relation_count();
  manifest["lexicalizations"] = graph.lexicalization_count();
  manifest["ingest"] = {
      {"triplet_lines_added", trip_total.added},   {"triplet_lines_skipped", trip_total.skipped},
      {"triplet_duplicates", trip_total.duplicates}, {"lexical_records_added", lex_total.added},
      {"lexical_records_skipped", lex_total.skipped}, {"aliases_dropped", lex_total.aliases_dropped},
      {"benchmark_records", bench_report.added},    {"benchmark_records_skipped", bench_report.skipped}};
  auto langs = nlohmann::ordered_json::array();
  for (const auto& l : cfg.languages.codes()) langs.push_back(l.str());
  manifest["languages"] = std::move(langs);
  write_json_file(manifest_path(*cfg.paths.snapshot), manifest);
  for (const auto& w : trip_total.warnings) std::clog << "kgtrick: triplets: " << w << '\n';
  for (const auto& w : lex_total.warnings) std::clog << "kgtrick: lexical: " << w << '\n';
  out << "ingested " << graph.triplet_count() << " triplets, " << graph.entity_count() << " entities -> "
      << cfg.paths.snapshot->string() << '\n';
  return kOk;
}

inline std::unordered_set<std::string> collect_test_qids(const Config& cfg) {
  std::unordered_set<std::string> qids;
  if (cfg.paths.benchmark) {
    require_file(cfg.paths.benchmark, "benchmark file");
    for (const auto& r : read_benchmark(*cfg.paths.benchmark, cfg.languages)) qids.insert(r.qid);
  }
  if (cfg.paths.test_qids) {
    require_file(cfg.paths.test_qids, "test qid file");
    std::ifstream in(*cfg.paths.test_qids);
    std::string line;
    while (std::getline(in, line)) {
      auto q = trim(line);
      if (!q.empty()) qids.emplace(q);
    }
  }
  return qids;
}

inline int cmd_build_dataset(const Config& cfg, const std::string& output, std::ostream& out) {
  require_file(cfg.paths.snapshot, "snapshot");
  const auto test_qids = collect_test_qids(cfg);
  MixConfig mix_cfg{cfg.kgc_fraction, cfg.seed, cfg.effective_directions()};
  mix_cfg.validate();
  const KnowledgeGraph graph = read_snapshot(*cfg.paths.snapshot);

  ContaminationFilter filter(test_qids);
  std::vector<TrainingRecord> kge, kgc;
  auto kge_sink = [&](TrainingRecord r) { kge.push_back(std::move(r)); };
  auto kgc_sink = [&](TrainingRecord r) { kgc.push_back(std::move(r)); };
  const auto kge_stats = build_kge(graph, mix_cfg.directions, filter.wrap(kge_sink));
  const auto kgc_stats = build_kgc(graph, mix_cfg.directions, filter.wrap(kgc_sink));

  DatasetManifest manifest;
  manifest.kge_records = kge.size();
  manifest.kgc_records = kgc.size();
  manifest.kgc_sampled = kgc_sample_size(cfg.kgc_fraction, kgc.size());
  manifest.contamination_dropped = filter.dropped();
  manifest.missing_lexicalization = kge_stats.missing_lexicalization + kgc_stats.missing_lexicalization;
  manifest.rejected = kge_stats.rejected + kgc_stats.rejected;
  manifest.seed = cfg.seed;
  manifest.kgc_fraction = cfg.kgc_fraction;
  manifest.directions = mix_cfg.directions;

  const auto mixed = mix(std::move(kgc), std::move(kge), mix_cfg);
  manifest.total = mixed.size();
  const fs::path path = output.empty() ? output_dir(cfg) / "train.jsonl" : fs::path(output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write '" + path.string() + "'");
  TrainingFileWriter writer(file);
  for (const auto& r : mixed) writer(r);
  file.close();
  write_json_file(manifest_path(path), manifest.to_json());
  out << "wrote " << mixed.size() << " records (" << manifest.kge_records << " KGE + " << manifest.kgc_sampled
      << " KGC) -> " << path.string() << '\n';
  return kOk;
}

inline std::unique_ptr<Backend> make_backend(const Config& cfg, const KnowledgeGraph& graph) {
  const auto spec = cfg.backend_spec();
  switch (spec.kind) {
    case BackendSpec::Kind::Oracle:
      return std::make_unique<OracleBackend>(graph);
    case BackendSpec::Kind::Static: {
      require_file(fs::path(spec.location), "predictions file");
      return std::make_unique<StaticBackend>(StaticBackend::from_file(spec.location));
    }
    case BackendSpec::Kind::Remote:
      return std::make_unique<RemoteBackend>(
          RemoteOptions{spec.location, std::chrono::milliseconds(cfg.remote.timeout_ms), cfg.remote.max_in_flight,
                        cfg.remote.retries, cfg.remote.max_batch});
  }
  throw ConfigError("unsupported backend");
}

inline int cmd_eval(const Config& cfg, const std::string& task, std::ostream& out) {
  if (task != "kgc" && task != "kge") throw ConfigError("eval task must be kgc or kge, got '" + task + "'");
  require_file(cfg.paths.snapshot, "snapshot");
  if (task == "kgc") require_file(cfg.paths.kgc_test, "KGC test triplet file");
  if (task == "kge") require_file(cfg.paths.benchmark, "benchmark file");
  if (cfg.paths.external_scores) require_file(cfg.paths.external_scores, "external score file");
  const KnowledgeGraph graph = read_snapshot(*cfg.paths.snapshot);
  auto backend = make_backend(cfg, graph);
  const fs::path dir = output_dir(cfg);
  const fs::path checkpoint = dir / (task + ".checkpoint.jsonl");

  EvalReport report;
  try {
    if (task == "kgc") {
      IngestReport parse_report;
      const auto test = read_triplets(*cfg.paths.kgc_test, &parse_report);
      for (const auto& w : parse_report.warnings) std::clog << "kgtrick: test triplets: " << w << '\n';
      KgcEvalOptions opt{cfg.effective_eval_languages(), cfg.require_language(cfg.source_lang), cfg.k_list,
                         cfg.num_candidates, cfg.effective_vote_mode(), cfg.chunk_size, cfg.parallel_languages,
                         checkpoint};
      report = run_kgc_eval(test, graph, *backend, opt);
    } else {
      const auto bench = read_benchmark(*cfg.paths.benchmark, cfg.languages);
      KgeEvalOptions opt{cfg.require_language(cfg.source_lang), cfg.num_candidates, cfg.chunk_size, checkpoint,
                         std::nullopt};
      if (cfg.paths.external_scores) opt.external_scores = read_external_scores(*cfg.paths.external_scores);
      report = run_kge_eval(bench, graph, *backend, opt);
    }
  } catch (const TransportError& e) {
    std::cerr << "kgtrick: " << e.what() << "; progress kept in " << checkpoint.string() << '\n';
    return kInternal;
  }
  {
    std::ofstream jsonl(dir / (task + "_report.jsonl"), std::ios::binary | std::ios::trunc);
    report.write_jsonl(jsonl);
    std::ofstream table(dir / (task + "_table.txt"), std::ios::binary | std::ios::trunc);
    table << report.render_table();
    if (!jsonl || !table) throw IoError("cannot write report files in '" + dir.string() + "'");
  }
  out << report.render_table();
  return kOk;
}

inline int cmd_link(const Config& cfg, const Flags& f, std::ostream& out) {
  require_file(cfg.paths.snapshot, "snapshot");
  const auto lang = cfg.require_language(f.lang);
  const KnowledgeGraph graph = read_snapshot(*cfg.paths.snapshot);
  const auto linked = link(parse_output(f.text), lang, graph);
  if (!linked) {
    out << "none\n";
  } else {
    out << linked->qid << '\t' << linked->sim << '\n';
  }
  return kOk;
}

// Input lines: {"query": id, "lang": code, "ranked": [qid, ...]}. Output one
// line per query, in order of first appearance.
inline int cmd_ensemble(const Config& cfg, const Flags& f, std::ostream& out) {
  require_file(fs::path(f.input), "linked file");
  std::ifstream in(f.input);
  std::vector<std::string> order;
  std::map<std::string, std::vector<LanguageSlate>> slates;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto query = j.at("query").is_string() ? j.at("query").get<std::string>() : j.at("query").dump();
      if (!slates.contains(query)) order.push_back(query);
      slates[query].push_back(
          {cfg.require_language(j.at("lang").get<std::string>()), j.at("ranked").get<std::vector<std::string>>()});
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("linked file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  std::ofstream file;
  std::ostream* sink = &out;
  if (!f.output.empty()) {
    file.open(f.output, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write '" + f.output + "'");
    sink = &file;
  }
  for (const auto& q : order) {
    nlohmann::ordered_json row;
    row["query"] = q;
    row["ranked"] = nlohmann::ordered_json::array();
    for (const auto& e : ensemble(slates[q], cfg.effective_vote_mode()).ranked) {
      row["ranked"].push_back(
          {{"qid", e.qid}, {"votes", e.votes}, {"best_rank", e.best_rank}, {"rr_sum", e.rr_sum}});
    }
    *sink << row.dump() << '\n';
  }
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"kgtrick: multilingual knowledge-graph completion and enhancement toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* sub) {
    sub->add_option("-c,--config", f.config, "JSON config file");
    sub->add_option("--languages", f.languages, "configured language codes");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--backend", f.backend, "oracle | static:<path> | remote:<url>");
    sub->add_option("--num-candidates", f.num_candidates, "candidates requested per query");
    sub->add_option("--snapshot", f.snapshot, "store snapshot path");
    sub->add_option("--output-dir", f.output_dir, "directory for outputs");
    sub->add_option("--benchmark", f.benchmark, "benchmark file");
    sub->add_option("--vote-mode", f.vote_mode, "full_beam | top1");
  };

  auto* ingest = app.add_subcommand("ingest", "ingest triplet and lexical files into a snapshot");
  common(ingest);
  ingest->add_option("--triplets", f.triplets, "triplet files (head<TAB>rel<TAB>tail)");
  ingest->add_option("--lexical", f.lexical, "lexical record files");

  auto* build = app.add_subcommand("build-dataset", "build the mixed training file");
  common(build);
  build->add_option("--kgc-fraction", f.kgc_fraction, "fraction of KGC records kept");
  build->add_option("--directions", f.directions, "training directions such as en-es");
  build->add_option("--test-qids", f.test_qids, "extra held-out entity IDs, one per line");
  build->add_option("-o,--output", f.output, "training file path");

  auto* eval = app.add_subcommand("eval", "evaluate a backend");
  common(eval);
  eval->add_option("task", f.task, "kgc | kge")->required()->check(CLI::IsMember({"kgc", "kge"}));
  eval->add_option("--kgc-test", f.kgc_test, "KGC test triplets");
  eval->add_option("--external-scores", f.external_scores, "line-delimited {qid, lang, score}");

  auto* link_cmd = app.add_subcommand("link", "link one generated surface to an entity");
  common(link_cmd);
  link_cmd->add_option("--lang", f.lang, "language of the surface")->required();
  link_cmd->add_option("--text", f.text, "generated text, e.g. 'Paris | capital of France'")->required();

  auto* ens = app.add_subcommand("ensemble", "ensemble per-language linked slates");
  common(ens);
  ens->add_option("-i,--input", f.input, "linked slates file")->required();
  ens->add_option("-o,--output", f.output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "kgtrick: " << e.what() << '\n' << app.help();
    return kBadInput;
  }

  try {
    const Config cfg = resolve_config(f);
    if (ingest->parsed()) return cmd_ingest(cfg, out);
    if (build->parsed()) return cmd_build_dataset(cfg, f.output, out);
    if (eval->parsed()) return cmd_eval(cfg, f.task, out);
    if (link_cmd->parsed()) return cmd_link(cfg, f, out);
    if (ens->parsed()) return cmd_ensemble(cfg, f, out);
  } catch (const InputError& e) {
    err << "kgtrick: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "kgtrick: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kBadInput;
}

}  // namespace kgtrick::cli
