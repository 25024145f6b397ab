// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgtrick/error.hpp"
#include "kgtrick/kgstore.hpp"
#include "kgtrick/language.hpp"

namespace kgtrick {

// Entities linked from one target language, best first, no repeats.
struct LanguageSlate {
  LanguageCode lang;
  std::vector<std::string> ranked;
};

struct EnsembleEntry {
  std::string qid;
  int votes = 0;
  int best_rank = 0;
  double rr_sum = 0.0;

  friend bool operator==(const EnsembleEntry&, const EnsembleEntry&) = default;
};

struct EnsembleResult {
  std::vector<EnsembleEntry> ranked;

  std::vector<std::string> qids() const {
    std::vector<std::string> out;
    out.reserve(ranked.size());
    for (const auto& e : ranked) out.push_back(e.qid);
    return out;
  }

  friend bool operator==(const EnsembleResult&, const EnsembleResult&) = default;
};

enum class VoteMode { FullBeam, TopOne };

inline void validate_slate(const LanguageSlate& slate) {
  std::unordered_set<std::string_view> seen;
  for (const auto& q : slate.ranked) {
    if (!seen.insert(q).second) {
      throw ValidationError("entity " + q + " appears twice in the " + slate.lang.str() + " slate");
    }
  }
}

// Majority vote across languages: order by (votes desc, best_rank asc,
// rr_sum desc, qid asc).
inline EnsembleResult ensemble(std::span<const LanguageSlate> slates, VoteMode mode = VoteMode::FullBeam) {
  std::unordered_map<std::string, std::vector<int>> positions;
  for (const auto& slate : slates) {
    validate_slate(slate);
    const std::size_t depth = mode == VoteMode::TopOne ? std::min<std::size_t>(1, slate.ranked.size())
                                                       : slate.ranked.size();
    for (std::size_t i = 0; i < depth; ++i) positions[slate.ranked[i]].push_back(static_cast<int>(i + 1));
  }

  EnsembleResult result;
  result.ranked.reserve(positions.size());
  for (auto& [qid, pos] : positions) {
    // Summing in sorted order keeps rr_sum independent of slate order.
    std::sort(pos.begin(), pos.end());
    double rr = 0.0;
    for (int p : pos) rr += 1.0 / p;
    result.ranked.push_back({qid, static_cast<int>(pos.size()), pos.front(), rr});
  }
  std::sort(result.ranked.begin(), result.ranked.end(), [](const EnsembleEntry& a, const EnsembleEntry& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.best_rank != b.best_rank) return a.best_rank < b.best_rank;
    if (a.rr_sum != b.rr_sum) return a.rr_sum > b.rr_sum;
    return qid_less(a.qid, b.qid);
  });
  return result;
}

}  // namespace kgtrick
