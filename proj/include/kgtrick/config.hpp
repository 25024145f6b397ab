// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgtrick/dataset_builder.hpp"
#include "kgtrick/ensembler.hpp"
#include "kgtrick/error.hpp"
#include "kgtrick/language.hpp"

namespace kgtrick {

namespace fs = std::filesystem;

struct BackendSpec {
  enum class Kind { Oracle, Static, Remote };
  Kind kind = Kind::Oracle;
  std::string location;  // predictions path or endpoint URL

  // "oracle" | "static:<path>" | "remote:<url>"
  static BackendSpec parse(std::string_view text) {
    if (text == "oracle") return {Kind::Oracle, {}};
    if (text.starts_with("static:") && text.size() > 7) return {Kind::Static, std::string(text.substr(7))};
    if (text.starts_with("remote:") && text.size() > 7) return {Kind::Remote, std::string(text.substr(7))};
    throw ConfigError("backend must be oracle, static:<path> or remote:<url>, got '" + std::string(text) + "'");
  }
};

struct RemoteSettings {
  std::int64_t timeout_ms = 30000;
  std::size_t max_in_flight = 4;
  int retries = 2;
  std::size_t max_batch = 64;
};

struct PathSettings {
  std::vector<fs::path> triplets;
  std::vector<fs::path> lexical;
  std::optional<fs::path> benchmark;
  std::optional<fs::path> snapshot;
  std::optional<fs::path> output_dir;
  std::optional<fs::path> kgc_test;
  std::optional<fs::path> test_qids;
  std::optional<fs::path> external_scores;
};

// Everything a command needs. Layering, later wins: defaults, config file,
// KGTRICK_* environment variables, command-line flags.
struct Config {
  LanguageSet languages = LanguageSet::defaults();
  std::vector<std::string> directions;  // "en-es"; empty means the EN->XX default
  bool include_en_en = true;
  double kgc_fraction = 0.5;
  std::uint64_t seed = 0;
  int num_candidates = 10;
  std::string backend = "oracle";
  std::string source_lang = "en";
  std::vector<std::string> eval_languages;  // empty means all configured languages
  std::vector<int> k_list = {1, 3, 10};
  std::string vote_mode = "full_beam";
  bool parallel_languages = false;
  std::size_t chunk_size = 256;
  RemoteSettings remote;
  PathSettings paths;

  std::vector<Direction> effective_directions() const {
    if (directions.empty()) return default_directions(languages, include_en_en);
    std::vector<Direction> out;
    for (const auto& d : directions) out.push_back(Direction::parse(d, languages));
    return out;
  }

  std::vector<LanguageCode> effective_eval_languages() const {
    if (eval_languages.empty()) return languages.codes();
    std::vector<LanguageCode> out;
    for (const auto& l : eval_languages) out.push_back(require_language(l));
    return out;
  }

  LanguageCode require_language(std::string_view code) const {
    auto lang = languages.parse(code);
    if (!lang) throw ConfigError("language '" + std::string(code) + "' is not configured");
    return *lang;
  }

  VoteMode effective_vote_mode() const {
    if (vote_mode == "full_beam") return VoteMode::FullBeam;
    if (vote_mode == "top1") return VoteMode::TopOne;
    throw ConfigError("vote_mode must be full_beam or top1");
  }

  BackendSpec backend_spec() const { return BackendSpec::parse(backend); }

  void validate() const {
    if (languages.empty()) throw ConfigError("no languages configured");
    if (!(kgc_fraction >= 0.0 && kgc_fraction <= 1.0)) {
      throw ConfigError("kgc_fraction must lie in [0, 1], got " + std::to_string(kgc_fraction));
    }
    if (num_candidates < 1) throw ConfigError("num_candidates must be >= 1");
    if (chunk_size == 0) throw ConfigError("chunk_size must be positive");
    for (int k : k_list) {
      if (k < 1) throw ConfigError("k_list entries must be >= 1");
    }
    if (effective_directions().empty()) throw ConfigError("no training directions");
    require_language(source_lang);
    effective_eval_languages();
    effective_vote_mode();
    backend_spec();
    if (remote.max_in_flight == 0 || remote.max_batch == 0 || remote.timeout_ms <= 0 || remote.retries < 0) {
      throw ConfigError("remote settings must be positive");
    }
  }

  // Reads a JSON config; relative paths resolve against the file's directory.
  static Config load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    Config cfg;
    cfg.merge(j, path.parent_path());
    return cfg;
  }

  void merge(const nlohmann::json& j, const fs::path& base) {
    static const std::set<std::string> known = {
        "languages", "directions",     "include_en_en", "kgc_fraction", "seed",   "num_candidates",
        "backend",   "source_lang",    "eval_languages", "k_list",      "vote_mode", "parallel_languages",
        "chunk_size", "remote",        "paths"};
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    try {
      if (j.contains("languages")) languages = LanguageSet(j["languages"].get<std::vector<std::string>>());
      if (j.contains("directions")) directions = j["directions"].get<std::vector<std::string>>();
      if (j.contains("include_en_en")) include_en_en = j["include_en_en"].get<bool>();
      if (j.contains("kgc_fraction")) kgc_fraction = j["kgc_fraction"].get<double>();
      if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
      if (j.contains("num_candidates")) num_candidates = j["num_candidates"].get<int>();
      if (j.contains("backend")) backend = j["backend"].get<std::string>();
      if (j.contains("source_lang")) source_lang = j["source_lang"].get<std::string>();
      if (j.contains("eval_languages")) eval_languages = j["eval_languages"].get<std::vector<std::string>>();
      if (j.contains("k_list")) k_list = j["k_list"].get<std::vector<int>>();
      if (j.contains("vote_mode")) vote_mode = j["vote_mode"].get<std::string>();
      if (j.contains("parallel_languages")) parallel_languages = j["parallel_languages"].get<bool>();
      if (j.contains("chunk_size")) chunk_size = j["chunk_size"].get<std::size_t>();
      if (j.contains("remote")) {
        const auto& r = j["remote"];
        remote.timeout_ms = r.value("timeout_ms", remote.timeout_ms);
        remote.max_in_flight = r.value("max_in_flight", remote.max_in_flight);
        remote.retries = r.value("retries", remote.retries);
        remote.max_batch = r.value("max_batch", remote.max_batch);
      }
      if (j.contains("paths")) {
        const auto& p = j["paths"];
        auto resolve = [&](const std::string& s) { return fs::path(s).is_absolute() ? fs::path(s) : base / s; };
        auto list = [&](const char* key, std::vector<fs::path>& dst) {
          if (!p.contains(key)) return;
          dst.clear();
          if (p[key].is_string()) {
            dst.push_back(resolve(p[key].get<std::string>()));
          } else {
            for (const auto& s : p[key]) dst.push_back(resolve(s.get<std::string>()));
          }
        };
        auto one = [&](const char* key, std::optional<fs::path>& dst) {
          if (p.contains(key) && !p[key].is_null()) dst = resolve(p[key].get<std::string>());
        };
        list("triplets", paths.triplets);
        list("lexical", paths.lexical);
        one("benchmark", paths.benchmark);
        one("snapshot", paths.snapshot);
        one("output_dir", paths.output_dir);
        one("kgc_test", paths.kgc_test);
        one("test_qids", paths.test_qids);
        one("external_scores", paths.external_scores);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config value has the wrong type: ") + e.what());
    }
  }

  // KGTRICK_SEED, KGTRICK_KGC_FRACTION, KGTRICK_BACKEND, KGTRICK_NUM_CANDIDATES,
  // KGTRICK_LANGUAGES (comma-separated), KGTRICK_SNAPSHOT, KGTRICK_OUTPUT_DIR.
  void apply_environment() {
    auto env = [](const char* name) -> std::optional<std::string> {
      const char* v = std::getenv(name);
      return v && *v ? std::optional<std::string>(v) : std::nullopt;
    };
    try {
      if (auto v = env("KGTRICK_SEED")) seed = std::stoull(*v);
      if (auto v = env("KGTRICK_KGC_FRACTION")) kgc_fraction = std::stod(*v);
      if (auto v = env("KGTRICK_NUM_CANDIDATES")) num_candidates = std::stoi(*v);
    } catch (const std::logic_error&) {
      throw ConfigError("malformed numeric KGTRICK_* environment variable");
    }
    if (auto v = env("KGTRICK_BACKEND")) backend = *v;
    if (auto v = env("KGTRICK_SNAPSHOT")) paths.snapshot = *v;
    if (auto v = env("KGTRICK_OUTPUT_DIR")) paths.output_dir = *v;
    if (auto v = env("KGTRICK_LANGUAGES")) {
      LanguageSet set;
      std::string_view rest = *v;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        set.add(LanguageCode(trim(rest.substr(0, comma))));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      languages = std::move(set);
    }
  }
};

inline void require_file(const std::optional<fs::path>& path, std::string_view what) {
  if (!path) throw ConfigError(std::string(what) + " path is not configured");
  if (!fs::is_regular_file(*path)) throw IoError(std::string(what) + " '" + path->string() + "' does not exist");
}

}  // namespace kgtrick
