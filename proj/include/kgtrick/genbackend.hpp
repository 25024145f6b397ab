// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgtrick/error.hpp"
#include "kgtrick/kgstore.hpp"
#include "kgtrick/verbalizer.hpp"

namespace kgtrick {

// The target language travels beside the text, never inside it.
struct GenerationRequest {
  std::string input_text;
  LanguageCode target_lang;
  int num_candidates = 10;
};

struct GenerationCandidate {
  std::string text;
  double score = 0.0;  // higher is better; not a probability

  friend bool operator==(const GenerationCandidate&, const GenerationCandidate&) = default;
};

using CandidateList = std::vector<GenerationCandidate>;

// Stable sort, best first. Returns true if the list was already sorted.
inline bool sort_candidates(CandidateList& list) {
  auto by_score = [](const GenerationCandidate& a, const GenerationCandidate& b) { return a.score > b.score; };
  if (std::is_sorted(list.begin(), list.end(), by_score)) return true;
  std::stable_sort(list.begin(), list.end(), by_score);
  return false;
}

// A text generator realizing o = model(src, tgt, head, relation, ?).
// Implementations must be safe to call from several threads at once.
class Backend {
 public:
  virtual ~Backend() = default;

  // One candidate list per request, in request order.
  virtual std::vector<CandidateList> generate(std::span<const GenerationRequest> batch) = 0;

  virtual std::string name() const = 0;
};

inline void validate_request(const GenerationRequest& r) {
  if (r.num_candidates < 1) throw ValidationError("num_candidates must be >= 1");
  if (!parse_input(r.input_text)) throw ValidationError("request input is not a verbalized query: '" + r.input_text + "'");
}

// Checks the batch, runs the backend and enforces the output contract.
inline std::vector<CandidateList> generate(std::span<const GenerationRequest> batch, Backend& backend) {
  if (batch.empty()) throw ValidationError("empty generation batch");
  for (const auto& r : batch) validate_request(r);
  auto out = backend.generate(batch);
  if (out.size() != batch.size()) {
    throw ProtocolError(backend.name() + " returned " + std::to_string(out.size()) + " lists for " +
                        std::to_string(batch.size()) + " requests");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    sort_candidates(out[i]);
    if (out[i].size() > static_cast<std::size_t>(batch[i].num_candidates)) out[i].resize(batch[i].num_candidates);
  }
  return out;
}

// Plays a perfect model by reading answers straight out of the graph.
class OracleBackend final : public Backend {
 public:
  explicit OracleBackend(const KnowledgeGraph& graph) : graph_(&graph) {
    // Every label a serialized query could carry, per source language.
    for (const auto& rel : graph.relations()) {
      for (const auto& lang : graph.languages().codes()) {
        labels_[{lang, relation_label(graph, rel.pid, lang)}].push_back(rel.pid);
      }
    }
  }

  std::string name() const override { return "oracle"; }

  std::vector<CandidateList> generate(std::span<const GenerationRequest> batch) override {
    std::vector<CandidateList> out;
    out.reserve(batch.size());
    for (const auto& r : batch) out.push_back(answer(r));
    return out;
  }

  CandidateList answer(const GenerationRequest& r) const {
    CandidateList out;
    const auto parsed = parse_input(r.input_text);
    if (!parsed) return out;
    auto pids = labels_.find({parsed->src, parsed->label});
    if (pids == labels_.end()) return out;

    std::vector<std::string> texts;
    std::unordered_set<std::string> seen;
    auto push = [&](std::string text) {
      if (seen.insert(text).second) texts.push_back(std::move(text));
    };
    for (const Entity* head : heads(*parsed)) {
      for (const auto& pid : pids->second) {
        const Lexicalization* tgt = head->lexicalization(r.target_lang);
        switch (kind_for_relation(pid)) {
          case TaskKind::KgeName:
            if (tgt) {
              push(tgt->primary_name);
              for (const auto& alias : tgt->aliases) push(alias);
            }
            break;
          case TaskKind::KgeDescription:
            if (tgt && tgt->description) push(*tgt->description);
            break;
          case TaskKind::KgcTail:
            for (const Entity* tail : graph_->known_tail_entities(head->qid, pid)) {
              if (tail->lexicalization(r.target_lang)) push(serialize_target(*tail, r.target_lang));
            }
            break;
        }
      }
    }
    const auto n = std::min(texts.size(), static_cast<std::size_t>(std::max(r.num_candidates, 0)));
    for (std::size_t i = 0; i < n; ++i) out.push_back({std::move(texts[i]), -static_cast<double>(i + 1)});
    return out;
  }

 private:
  // Entities whose source lexicalization renders as the query's head text.
  // The ": " between name and description may also occur inside a name, so
  // every split point is tried.
  std::vector<const Entity*> heads(const ParsedInput& q) const {
    std::vector<const Entity*> out;
    auto consider = [&](std::string_view name, std::optional<std::string_view> desc) {
      for (const Entity* e : graph_->lookup_entities(q.src, name)) {
        const Lexicalization* lex = e->lexicalization(q.src);
        if (!lex || lex->primary_name != name) continue;
        if (desc && lex->description != desc) continue;
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
      }
    };
    const std::string_view text = q.head_text;
    consider(text, std::nullopt);
    for (auto pos = text.find(kHeadDescSeparator); pos != std::string_view::npos;
         pos = text.find(kHeadDescSeparator, pos + 1)) {
      consider(text.substr(0, pos), text.substr(pos + kHeadDescSeparator.size()));
    }
    std::sort(out.begin(), out.end(), [](const Entity* a, const Entity* b) { return qid_less(a->qid, b->qid); });
    return out;
  }

  const KnowledgeGraph* graph_;
  std::map<std::pair<LanguageCode, std::string>, std::vector<std::string>> labels_;
};

// Serves predictions produced elsewhere, keyed by (input text, target language).
class StaticBackend final : public Backend {
 public:
  StaticBackend() = default;
  StaticBackend(StaticBackend&& other) noexcept
      : entries_(std::move(other.entries_)), misses_(other.misses_.load()) {}
  StaticBackend& operator=(StaticBackend&& other) noexcept {
    entries_ = std::move(other.entries_);
    misses_ = other.misses_.load();
    return *this;
  }

  void add(std::string input, const LanguageCode& lang, CandidateList candidates) {
    sort_candidates(candidates);
    entries_[key(input, lang)] = std::move(candidates);
  }

  // Line-delimited {input, target_lang, candidates:[{text, score}]}.
  static StaticBackend from_stream(std::istream& in) {
    StaticBackend backend;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (trim(line).empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        CandidateList list;
        for (const auto& c : j.at("candidates")) {
          list.push_back({c.at("text").get<std::string>(), c.at("score").get<double>()});
        }
        backend.add(j.at("input").get<std::string>(), LanguageCode(j.at("target_lang").get<std::string>()),
                    std::move(list));
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("predictions line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    return backend;
  }

  static StaticBackend from_file(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return from_stream(in);
  }

  std::string name() const override { return "static"; }

  std::vector<CandidateList> generate(std::span<const GenerationRequest> batch) override {
    std::vector<CandidateList> out;
    out.reserve(batch.size());
    for (const auto& r : batch) {
      auto it = entries_.find(key(r.input_text, r.target_lang));
      if (it == entries_.end()) {
        misses_.fetch_add(1, std::memory_order_relaxed);
        out.emplace_back();
        continue;
      }
      const auto n = std::min(it->second.size(), static_cast<std::size_t>(std::max(r.num_candidates, 0)));
      out.emplace_back(it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return out;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t misses() const noexcept { return misses_.load(); }

 private:
  static std::string key(std::string_view input, const LanguageCode& lang) {
    std::string k(lang.view());
    k.push_back('\x1f');
    k.append(input);
    return k;
  }

  std::unordered_map<std::string, CandidateList> entries_;
  std::atomic<std::size_t> misses_{0};
};

}  // namespace kgtrick
