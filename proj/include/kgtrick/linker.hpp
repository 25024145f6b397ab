// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgtrick/ensembler.hpp"
#include "kgtrick/genbackend.hpp"
#include "kgtrick/kgstore.hpp"
#include "kgtrick/text.hpp"
#include "kgtrick/verbalizer.hpp"

namespace kgtrick {

// Token-multiset F1 between two descriptions; 0 when either is missing.
// 2|A∩B| / (|A|+|B|), which is symmetric by construction.
inline double desc_sim(std::optional<std::string_view> a, std::optional<std::string_view> b,
                       const LanguageCode& lang) {
  if (!a || !b) return 0.0;
  const auto ta = tokenize(*a, lang);
  const auto tb = tokenize(*b, lang);
  if (ta.empty() || tb.empty()) return 0.0;
  std::unordered_map<std::string_view, int> counts;
  for (const auto& t : ta) ++counts[t];
  std::size_t overlap = 0;
  for (const auto& t : tb) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return 2.0 * static_cast<double>(overlap) / static_cast<double>(ta.size() + tb.size());
}

struct LinkResult {
  std::string qid;
  double sim = 0.0;
};

struct LinkedCandidate {
  std::string qid;
  LanguageCode source_lang;
  int gen_rank = 1;  // 1 = top generated candidate
  double sim = 0.0;
};

namespace detail {

inline std::optional<std::string_view> description_for_linking(const Entity& e, const LanguageCode& lang) {
  if (const auto* lex = e.lexicalization(lang); lex && lex->description) return *lex->description;
  if (const auto* en = e.lexicalization(kEnglish); en && en->description) return *en->description;
  return std::nullopt;
}

}  // namespace detail

// Resolves a generated surface to an existing entity. Closed world: a name
// that matches nothing yields no link. Among same-name entities the one whose
// description is most similar wins; ties go to the more popular tier, then
// to the smaller qid.
inline std::optional<LinkResult> link(const TargetSurface& surface, const LanguageCode& lang,
                                      const KnowledgeGraph& graph) {
  const auto candidates = graph.lookup_entities(lang, surface.name);
  if (candidates.empty()) return std::nullopt;
  if (candidates.size() == 1) return LinkResult{candidates.front()->qid, 1.0};

  const Entity* best = nullptr;
  double best_sim = -1.0;
  for (const Entity* e : candidates) {
    const double sim = desc_sim(surface.description, detail::description_for_linking(*e, lang), lang);
    const bool better = sim > best_sim ||
                        (sim == best_sim && (e->tier < best->tier ||
                                             (e->tier == best->tier && qid_less(e->qid, best->qid))));
    if (better) {
      best = e;
      best_sim = sim;
    }
  }
  return LinkResult{best->qid, best_sim};
}

// Links a ranked candidate list from one target language. Unparseable or
// unlinkable candidates are skipped; repeated entities keep their best rank.
inline std::vector<LinkedCandidate> link_candidates(const CandidateList& candidates, const LanguageCode& lang,
                                                    const KnowledgeGraph& graph) {
  std::vector<LinkedCandidate> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    TargetSurface surface;
    try {
      surface = parse_output(candidates[i].text);
    } catch (const ParseError&) {
      continue;
    }
    auto linked = link(surface, lang, graph);
    if (!linked) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const auto& c) { return c.qid == linked->qid; });
    if (!seen) out.push_back({std::move(linked->qid), lang, static_cast<int>(i + 1), linked->sim});
  }
  return out;
}

inline LanguageSlate to_slate(const std::vector<LinkedCandidate>& linked, const LanguageCode& lang) {
  LanguageSlate slate{lang, {}};
  slate.ranked.reserve(linked.size());
  for (const auto& c : linked) slate.ranked.push_back(c.qid);
  return slate;
}

}  // namespace kgtrick
