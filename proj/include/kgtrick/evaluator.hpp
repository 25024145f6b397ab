// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "kgtrick/ensembler.hpp"
#include "kgtrick/genbackend.hpp"
#include "kgtrick/kgstore.hpp"
#include "kgtrick/linker.hpp"
#include "kgtrick/metrics.hpp"
#include "kgtrick/report.hpp"
#include "kgtrick/verbalizer.hpp"

namespace kgtrick {

// Per-item progress of an evaluation run, one JSON line per finished item
// after a fingerprint header. A run that finds a checkpoint with the same
// fingerprint resumes from it; a mismatching one is discarded.
class EvalCheckpoint {
 public:
  EvalCheckpoint(std::optional<std::filesystem::path> path, std::string fingerprint)
      : path_(std::move(path)), fingerprint_(std::move(fingerprint)) {
    if (!path_) return;
    std::ifstream in(*path_);
    std::string line;
    if (in && std::getline(in, line) && line == header()) {
      while (std::getline(in, line)) {
        try {
          auto j = nlohmann::json::parse(line);
          done_.emplace(j.at("i").get<std::size_t>(), std::move(j));
        } catch (const nlohmann::json::exception&) {
          break;  // torn final line
        }
      }
    }
    in.close();
    out_.open(*path_, std::ios::trunc);
    if (!out_) throw IoError("cannot write checkpoint '" + path_->string() + "'");
    out_ << header() << '\n';
    for (const auto& [i, j] : done_) out_ << j.dump() << '\n';
    out_.flush();
  }

  const nlohmann::json* find(std::size_t index) const {
    auto it = done_.find(index);
    return it == done_.end() ? nullptr : &it->second;
  }

  void record(nlohmann::json item) {
    const auto index = item.at("i").get<std::size_t>();
    if (out_.is_open()) out_ << item.dump() << '\n';
    done_.insert_or_assign(index, std::move(item));
  }

  void flush() {
    if (out_.is_open()) out_.flush();
  }

  // Drops the file once the run has completed.
  void finish() {
    if (!path_) return;
    out_.close();
    std::error_code ec;
    std::filesystem::remove(*path_, ec);
  }

  std::size_t resumed() const noexcept { return done_.size(); }

 private:
  std::string header() const { return nlohmann::json{{"checkpoint", fingerprint_}}.dump(); }

  std::optional<std::filesystem::path> path_;
  std::string fingerprint_;
  std::map<std::size_t, nlohmann::json> done_;
  std::ofstream out_;
};

namespace detail {

inline std::vector<CandidateList> generate_per_language(
    const std::vector<std::vector<GenerationRequest>>& per_lang, Backend& backend, bool parallel) {
  std::vector<std::vector<CandidateList>> results(per_lang.size());
  if (parallel && per_lang.size() > 1) {
    std::vector<std::future<std::vector<CandidateList>>> futures;
    for (const auto& batch : per_lang) {
      futures.push_back(std::async(std::launch::async, [&backend, &batch] {
        return batch.empty() ? std::vector<CandidateList>{} : generate(batch, backend);
      }));
    }
    // Wait for every language before surfacing an error, so no request is
    // still in flight when the caller unwinds.
    std::exception_ptr first_error;
    for (std::size_t i = 0; i < futures.size(); ++i) {
      try {
        results[i] = futures[i].get();
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  } else {
    for (std::size_t i = 0; i < per_lang.size(); ++i) {
      if (!per_lang[i].empty()) results[i] = generate(per_lang[i], backend);
    }
  }
  std::vector<CandidateList> flat;
  for (auto& r : results) {
    for (auto& l : r) flat.push_back(std::move(l));
  }
  return flat;
}

inline std::vector<std::string> tier_order(const std::set<std::string>& present) {
  std::vector<std::string> out;
  for (auto t : {Tier::Head, Tier::Torso, Tier::Tail, Tier::Unknown}) {
    if (present.contains(std::string(to_string(t)))) out.emplace_back(to_string(t));
  }
  out.emplace_back(kAll);
  return out;
}

inline nlohmann::json optional_int(const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

inline std::optional<int> read_optional_int(const nlohmann::json& j) {
  return j.is_null() ? std::nullopt : std::optional<int>(j.get<int>());
}

}  // namespace detail

struct KgcEvalOptions {
  std::vector<LanguageCode> languages;  // target languages generated and ensembled
  LanguageCode source_lang = kEnglish;
  std::vector<int> k_list = {1, 3, 10};
  int num_candidates = 10;
  VoteMode vote_mode = VoteMode::FullBeam;
  std::size_t chunk_size = 256;
  bool parallel_languages = false;
  std::optional<std::filesystem::path> checkpoint;
};

// Link prediction over test triplets: verbalize per target language,
// generate, parse, link, ensemble across languages, then take the filtered
// rank of the gold tail. Per-language rows score each language's own slate.
inline EvalReport run_kgc_eval(std::span<const Triplet> test, const KnowledgeGraph& graph, Backend& backend,
                               const KgcEvalOptions& opt) {
  if (opt.languages.empty()) throw ConfigError("KGC evaluation needs at least one language");
  if (opt.chunk_size == 0) throw ConfigError("chunk_size must be positive");
  for (int k : opt.k_list) {
    if (k < 1) throw ConfigError("hit@k needs k >= 1");
  }
  std::string fingerprint = "kgc|" + std::to_string(test.size()) + "|" + opt.source_lang.str() + "|" +
                            std::to_string(opt.num_candidates) + "|" + backend.name() + "|" +
                            (opt.vote_mode == VoteMode::TopOne ? "top1" : "beam");
  for (const auto& l : opt.languages) fingerprint += "|" + l.str();
  EvalCheckpoint checkpoint(opt.checkpoint, fingerprint);
  const std::size_t n_lang = opt.languages.size();

  for (std::size_t start = 0; start < test.size(); start += opt.chunk_size) {
    const std::size_t end = std::min(test.size(), start + opt.chunk_size);
    struct Pending {
      std::size_t index;
      Tier tier;
    };
    std::vector<Pending> pending;
    std::vector<std::vector<GenerationRequest>> per_lang(n_lang);
    for (std::size_t i = start; i < end; ++i) {
      if (checkpoint.find(i)) continue;
      const Triplet& t = test[i];
      const Entity* head = graph.find_entity(t.head);
      const Tier tier = head ? head->tier : Tier::Unknown;
      std::vector<std::string> inputs;
      try {
        for (const auto& lang : opt.languages) {
          auto task = head ? make_task(kind_for_relation(t.rel), *head, t.rel, opt.source_lang, lang) : std::nullopt;
          if (!task || task->kind != TaskKind::KgcTail) throw ValidationError("unverbalizable");
          inputs.push_back(serialize_input(*task, graph));
        }
      } catch (const InputError&) {
        checkpoint.record({{"i", i}, {"skipped", true}, {"tier", to_string(tier)}});
        continue;
      }
      for (std::size_t l = 0; l < n_lang; ++l) {
        per_lang[l].push_back({std::move(inputs[l]), opt.languages[l], opt.num_candidates});
      }
      pending.push_back({i, tier});
    }
    if (pending.empty()) continue;

    const auto flat = detail::generate_per_language(per_lang, backend, opt.parallel_languages);
    for (std::size_t p = 0; p < pending.size(); ++p) {
      const Triplet& t = test[pending[p].index];
      std::unordered_set<std::string> filter;
      for (auto& q : graph.known_tails(t.head, t.rel)) {
        if (q != t.tail) filter.insert(std::move(q));
      }
      std::vector<LanguageSlate> slates;
      nlohmann::json lang_ranks = nlohmann::json::array();
      for (std::size_t l = 0; l < n_lang; ++l) {
        const auto& cands = flat[l * pending.size() + p];
        slates.push_back(to_slate(link_candidates(cands, opt.languages[l], graph), opt.languages[l]));
        auto own = ensemble(std::span(&slates.back(), 1), opt.vote_mode).qids();
        lang_ranks.push_back(detail::optional_int(rank_of_gold(own, t.tail, filter).rank));
      }
      const auto ranked = ensemble(slates, opt.vote_mode).qids();
      checkpoint.record({{"i", pending[p].index},
                         {"skipped", false},
                         {"tier", to_string(pending[p].tier)},
                         {"rank", detail::optional_int(rank_of_gold(ranked, t.tail, filter).rank)},
                         {"lang_ranks", std::move(lang_ranks)}});
    }
    checkpoint.flush();
  }

  // Aggregate.
  std::vector<std::string> lang_names{std::string(kAll)};
  for (const auto& l : opt.languages) lang_names.push_back(l.str());
  std::map<std::pair<std::string, std::string>, std::vector<RankOutcome>> groups;
  std::set<std::string> tiers;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& item = *checkpoint.find(i);
    if (item.at("skipped").get<bool>()) {
      ++skipped;
      continue;
    }
    const auto tier = item.at("tier").get<std::string>();
    tiers.insert(tier);
    for (std::size_t l = 0; l < lang_names.size(); ++l) {
      const RankOutcome o{detail::read_optional_int(l == 0 ? item.at("rank") : item.at("lang_ranks").at(l - 1))};
      groups[{lang_names[l], tier}].push_back(o);
      groups[{lang_names[l], std::string(kAll)}].push_back(o);
    }
  }

  EvalReport report("kgc");
  report.note("filtered ranking: other known tails of (head, relation) are removed before ranking gold");
  report.note("reciprocal rank is 0 when gold is not among the linked candidates");
  report.note("language 'all' is the cross-lingual ensemble; other rows score a single language");
  for (const auto& lang : lang_names) {
    for (const auto& tier : detail::tier_order(tiers)) {
      auto it = groups.find({lang, tier});
      if (it == groups.end()) continue;
      const auto& outcomes = it->second;
      report.add({lang, tier, "mrr", mrr(outcomes), outcomes.size()});
      for (int k : opt.k_list) {
        report.add({lang, tier, "hit@" + std::to_string(k), hits_at_k(outcomes, k), outcomes.size()});
      }
    }
  }
  report.add({std::string(kAll), std::string(kAll), "skipped", static_cast<double>(skipped), skipped});
  checkpoint.finish();
  return report;
}

// (qid, lang) -> externally computed description score.
using ExternalScores = std::map<std::pair<std::string, std::string>, double>;

inline ExternalScores read_external_scores(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  ExternalScores out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out[{j.at("qid").get<std::string>(), j.at("lang").get<std::string>()}] = j.at("score").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("external scores line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

struct KgeEvalOptions {
  LanguageCode source_lang = kEnglish;
  int num_candidates = 10;
  std::size_t chunk_size = 256;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<ExternalScores> external_scores;  // fills the "comet" column
};

// Name and description completion against benchmark rows: Coverage F1 over
// correct names, Precision F1 over correct+incorrect names, and corpus BLEU
// for descriptions, split by language and popularity tier.
inline EvalReport run_kge_eval(std::span<const BenchmarkRecord> bench, const KnowledgeGraph& graph,
                               Backend& backend, const KgeEvalOptions& opt) {
  if (opt.chunk_size == 0) throw ConfigError("chunk_size must be positive");
  EvalCheckpoint checkpoint(opt.checkpoint, "kge|" + std::to_string(bench.size()) + "|" + opt.source_lang.str() +
                                                "|" + std::to_string(opt.num_candidates) + "|" + backend.name());

  for (std::size_t start = 0; start < bench.size(); start += opt.chunk_size) {
    const std::size_t end = std::min(bench.size(), start + opt.chunk_size);
    std::vector<std::size_t> pending;
    std::vector<GenerationRequest> name_reqs;
    std::vector<GenerationRequest> desc_reqs;
    std::vector<std::optional<std::size_t>> desc_slot;
    for (std::size_t i = start; i < end; ++i) {
      if (checkpoint.find(i)) continue;
      const auto& rec = bench[i];
      const Entity* head = graph.find_entity(rec.qid);
      try {
        if (rec.correct_names.empty()) throw ValidationError("no gold names");
        auto names = head ? make_task(TaskKind::KgeName, *head, kNamesPid, opt.source_lang, rec.lang) : std::nullopt;
        if (!names) throw ValidationError("head has no source lexicalization");
        auto name_input = serialize_input(*names, graph);
        std::optional<std::string> desc_input;
        if (rec.gold_description) {
          auto desc = make_task(TaskKind::KgeDescription, *head, kDescriptionPid, opt.source_lang, rec.lang);
          desc_input = serialize_input(*desc, graph);
        }
        name_reqs.push_back({std::move(name_input), rec.lang, opt.num_candidates});
        if (desc_input) {
          desc_slot.push_back(desc_reqs.size());
          desc_reqs.push_back({std::move(*desc_input), rec.lang, 1});
        } else {
          desc_slot.push_back(std::nullopt);
        }
        pending.push_back(i);
      } catch (const InputError&) {
        checkpoint.record({{"i", i}, {"skipped", true}});
      }
    }
    if (pending.empty()) continue;

    const auto name_out = generate(name_reqs, backend);
    const auto desc_out = desc_reqs.empty() ? std::vector<CandidateList>{} : generate(desc_reqs, backend);
    for (std::size_t p = 0; p < pending.size(); ++p) {
      const auto& rec = bench[pending[p]];
      std::vector<std::string> predicted;
      for (const auto& c : name_out[p]) {
        try {
          predicted.push_back(parse_output(c.text).name);
        } catch (const ParseError&) {
        }
      }
      std::vector<LabeledName> labeled;
      for (const auto& n : rec.correct_names) labeled.push_back({n, true});
      for (const auto& n : rec.incorrect_names) labeled.push_back({n, false});
      nlohmann::json item = {{"i", pending[p]},
                             {"skipped", false},
                             {"coverage_f1", coverage_score(predicted, rec.correct_names, rec.lang).f1},
                             {"precision_f1", precision_task_score(labeled, predicted, rec.lang).f1}};
      if (desc_slot[p]) {
        const auto& top = desc_out[*desc_slot[p]];
        item["description"] = top.empty() ? std::string() : std::string(trim(top.front().text));
      }
      checkpoint.record(std::move(item));
    }
    checkpoint.flush();
  }

  struct Cell {
    std::vector<double> coverage, precision, comet;
    std::vector<BleuPair> bleu;
  };
  std::map<std::pair<std::string, std::string>, Cell> cells;
  std::set<std::string> langs, tiers;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < bench.size(); ++i) {
    const auto& item = *checkpoint.find(i);
    if (item.at("skipped").get<bool>()) {
      ++skipped;
      continue;
    }
    const auto& rec = bench[i];
    const std::string lang = rec.lang.str();
    const std::string tier(to_string(rec.tier));
    langs.insert(lang);
    tiers.insert(tier);
    for (const auto& key : {std::pair{lang, tier}, std::pair{lang, std::string(kAll)}, std::pair{std::string(kAll), tier},
                            std::pair{std::string(kAll), std::string(kAll)}}) {
      auto& cell = cells[key];
      cell.coverage.push_back(item.at("coverage_f1").get<double>());
      cell.precision.push_back(item.at("precision_f1").get<double>());
      if (item.contains("description") && rec.gold_description && key.first != kAll) {
        cell.bleu.push_back({item.at("description").get<std::string>(), {*rec.gold_description}});
      }
      if (opt.external_scores) {
        auto it = opt.external_scores->find({rec.qid, lang});
        if (it != opt.external_scores->end()) cell.comet.push_back(it->second);
      }
    }
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  // BLEU for a language is a corpus score; the "all" language row averages
  // the per-language corpus scores, as BLEU is not comparable across scripts.
  std::map<std::pair<std::string, std::string>, double> bleu_value;
  for (const auto& [key, cell] : cells) {
    if (key.first != kAll && !cell.bleu.empty()) bleu_value[key] = corpus_bleu(cell.bleu, LanguageCode(key.first));
  }

  EvalReport report("kge");
  report.note("coverage/precision: normalized exact name matching, macro-averaged over (entity, language) items");
  report.note("precision_f1 scores the system as a correct/incorrect classifier over the labeled names");
  report.note("bleu on a 0-1 scale; language 'all' averages per-language corpus BLEU");
  if (opt.external_scores) report.note("comet column merged from an external score file");
  std::vector<std::string> lang_rows(langs.begin(), langs.end());
  lang_rows.emplace_back(kAll);
  for (const auto& lang : lang_rows) {
    for (const auto& tier : detail::tier_order(tiers)) {
      auto it = cells.find({lang, tier});
      if (it == cells.end()) continue;
      const auto& cell = it->second;
      report.add({lang, tier, "coverage_f1", mean(cell.coverage), cell.coverage.size()});
      report.add({lang, tier, "precision_f1", mean(cell.precision), cell.precision.size()});
      if (lang != kAll) {
        if (auto b = bleu_value.find({lang, tier}); b != bleu_value.end()) {
          report.add({lang, tier, "bleu", b->second, cell.bleu.size()});
        }
      } else {
        std::vector<double> per_lang;
        std::size_t pairs = 0;
        for (const auto& l : langs) {
          if (auto b = bleu_value.find({l, tier}); b != bleu_value.end()) {
            per_lang.push_back(b->second);
            pairs += cells.at({l, tier}).bleu.size();
          }
        }
        if (!per_lang.empty()) report.add({lang, tier, "bleu", mean(per_lang), pairs});
      }
      if (!cell.comet.empty()) report.add({lang, tier, "comet", mean(cell.comet), cell.comet.size()});
    }
  }
  report.add({std::string(kAll), std::string(kAll), "skipped", static_cast<double>(skipped), skipped});
  checkpoint.finish();
  return report;
}

}  // namespace kgtrick
