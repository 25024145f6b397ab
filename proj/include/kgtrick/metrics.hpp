// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kgtrick/error.hpp"
#include "kgtrick/language.hpp"
#include "kgtrick/text.hpp"

namespace kgtrick {

// 1-based position of the gold answer; empty when it was not produced.
struct RankOutcome {
  std::optional<int> rank;

  friend bool operator==(const RankOutcome&, const RankOutcome&) = default;
};

// Filtered rank: other known-true answers are removed before locating gold.
inline RankOutcome rank_of_gold(std::span<const std::string> ranked, std::string_view gold,
                                const std::unordered_set<std::string>& filter) {
  if (filter.contains(std::string(gold))) throw ValidationError("gold answer is in its own filter set");
  int position = 0;
  for (const auto& q : ranked) {
    if (filter.contains(q)) continue;
    ++position;
    if (q == gold) return {position};
  }
  return {};
}

inline double hits_at_k(std::span<const RankOutcome> outcomes, int k) {
  if (outcomes.empty()) throw UndefinedInputError("hit@k over no outcomes");
  if (k < 1) throw ValidationError("k must be >= 1");
  const auto hits = std::count_if(outcomes.begin(), outcomes.end(),
                                  [k](const RankOutcome& o) { return o.rank && *o.rank <= k; });
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

// Reciprocal rank is 0 when gold is absent.
inline double mrr(std::span<const RankOutcome> outcomes) {
  if (outcomes.empty()) throw UndefinedInputError("MRR over no outcomes");
  double sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.rank) sum += 1.0 / *o.rank;
  }
  return sum / static_cast<double>(outcomes.size());
}

struct SetScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  static SetScore from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
    SetScore s{0.0, 0.0, 0.0, tp, fp, fn};
    if (tp + fp > 0) s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (s.precision + s.recall > 0) s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
    return s;
  }
};

namespace detail {

inline std::unordered_set<std::string> normalized_set(std::span<const std::string> names, const LanguageCode& lang) {
  std::unordered_set<std::string> out;
  for (const auto& n : names) {
    auto norm = normalize(n, lang);
    if (!norm.empty()) out.insert(std::move(norm));
  }
  return out;
}

}  // namespace detail

// Name-set overlap between predicted and gold names under normalized
// exact matching.
inline SetScore coverage_score(std::span<const std::string> predicted, std::span<const std::string> gold,
                               const LanguageCode& lang) {
  const auto g = detail::normalized_set(gold, lang);
  if (g.empty()) throw UndefinedInputError("coverage needs at least one gold name");
  const auto p = detail::normalized_set(predicted, lang);
  std::size_t tp = 0;
  for (const auto& n : p) tp += g.contains(n) ? 1 : 0;
  return SetScore::from_counts(tp, p.size() - tp, g.size() - tp);
}

struct LabeledName {
  std::string name;
  bool is_correct = false;
};

// Scores the system as a classifier: a labeled name is predicted correct iff
// the system produced it. Precision/recall are those of the "correct" class.
inline SetScore precision_task_score(std::span<const LabeledName> labeled, std::span<const std::string> system_names,
                                     const LanguageCode& lang) {
  if (labeled.empty()) throw UndefinedInputError("precision task needs labeled names");
  const auto sys = detail::normalized_set(system_names, lang);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& item : labeled) {
    const bool predicted = sys.contains(normalize(item.name, lang));
    if (predicted && item.is_correct) ++tp;
    if (predicted && !item.is_correct) ++fp;
    if (!predicted && item.is_correct) ++fn;
  }
  return SetScore::from_counts(tp, fp, fn);
}

struct BleuPair {
  std::string candidate;
  std::vector<std::string> references;
};

// Corpus BLEU on a 0-1 scale with uniform weights and no smoothing.
// Orders for which the candidate side has no n-grams at all are left out of
// the geometric mean, so corpora of short texts stay defined; any included
// order with zero matches makes the score 0.
inline double corpus_bleu(std::span<const BleuPair> pairs, const LanguageCode& lang, int max_n = 4) {
  if (pairs.empty()) throw UndefinedInputError("BLEU over an empty corpus");
  if (max_n < 1) throw ValidationError("max_n must be >= 1");
  using Gram = std::vector<std::string_view>;
  std::vector<std::size_t> matched(max_n, 0), total(max_n, 0);
  std::size_t cand_len = 0, ref_len = 0;

  auto count_grams = [](const std::vector<std::string>& toks, std::size_t n) {
    std::map<Gram, std::size_t> counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) ++counts[Gram(toks.begin() + i, toks.begin() + i + n)];
    return counts;
  };

  for (const auto& pair : pairs) {
    const auto cand = tokenize(pair.candidate, lang);
    std::vector<std::vector<std::string>> refs;
    for (const auto& r : pair.references) refs.push_back(tokenize(r, lang));
    cand_len += cand.size();
    // Closest reference length, shorter on ties.
    std::size_t best = 0;
    bool have = false;
    for (const auto& r : refs) {
      const auto d = [&](std::size_t len) { return len > cand.size() ? len - cand.size() : cand.size() - len; };
      if (!have || d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best)) {
        best = r.size();
        have = true;
      }
    }
    ref_len += best;

    for (int n = 1; n <= max_n; ++n) {
      const auto cand_counts = count_grams(cand, static_cast<std::size_t>(n));
      std::map<Gram, std::size_t> max_ref;
      for (const auto& r : refs) {
        for (const auto& [g, c] : count_grams(r, static_cast<std::size_t>(n))) {
          max_ref[g] = std::max(max_ref[g], c);
        }
      }
      for (const auto& [g, c] : cand_counts) {
        total[n - 1] += c;
        auto it = max_ref.find(g);
        if (it != max_ref.end()) matched[n - 1] += std::min(c, it->second);
      }
    }
  }
  if (cand_len == 0) return 0.0;

  double log_sum = 0.0;
  int orders = 0;
  for (int n = 0; n < max_n; ++n) {
    if (total[n] == 0) continue;
    if (matched[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched[n]) / static_cast<double>(total[n]));
    ++orders;
  }
  const double brevity =
      cand_len > ref_len ? 1.0 : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  return brevity * std::exp(log_sum / orders);
}

}  // namespace kgtrick
