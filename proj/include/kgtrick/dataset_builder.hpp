// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgtrick/error.hpp"
#include "kgtrick/kgstore.hpp"
#include "kgtrick/verbalizer.hpp"

namespace kgtrick {

struct Direction {
  LanguageCode src;
  LanguageCode tgt;

  std::string str() const { return src.str() + "-" + tgt.str(); }

  // "en-es"
  static Direction parse(std::string_view text, const LanguageSet& languages) {
    if (text.size() != 5 || text[2] != '-') throw ConfigError("malformed direction '" + std::string(text) + "'");
    return {languages.require(text.substr(0, 2)), languages.require(text.substr(3, 2))};
  }

  friend auto operator<=>(const Direction&, const Direction&) = default;
};

// EN->XX for every configured non-English language, plus EN->EN when asked.
inline std::vector<Direction> default_directions(const LanguageSet& languages, bool include_en_en = true) {
  std::vector<Direction> out;
  if (include_en_en) out.push_back({kEnglish, kEnglish});
  for (const auto& lang : languages.codes()) {
    if (lang != kEnglish) out.push_back({kEnglish, lang});
  }
  return out;
}

struct TrainingRecord {
  std::string input_text;
  std::string target_text;
  LanguageCode tgt_lang;
  TaskKind task = TaskKind::KgcTail;
  std::string head_qid;
  std::optional<std::string> tail_qid;

  friend bool operator==(const TrainingRecord&, const TrainingRecord&) = default;
};

struct BuildStats {
  std::size_t emitted = 0;
  std::size_t missing_lexicalization = 0;
  std::size_t rejected = 0;  // fields containing the reserved delimiter
};

namespace detail {

template <class Sink>
bool emit(BuildStats& stats, Sink& sink, const KnowledgeGraph& graph, const TaskTuple& t,
          std::string target, std::optional<std::string> tail_qid) {
  std::string input;
  try {
    input = serialize_input(t, graph);
  } catch (const DelimiterError&) {
    ++stats.rejected;
    return false;
  }
  if (target.find(kDelimiter) != std::string::npos && t.kind != TaskKind::KgcTail) {
    ++stats.rejected;
    return false;
  }
  sink(TrainingRecord{std::move(input), std::move(target), t.tgt, t.kind, t.head_qid, std::move(tail_qid)});
  ++stats.emitted;
  return true;
}

}  // namespace detail

// Enhancement corpus: per entity and direction, one name record for the
// target primary name, one per target alias, and one description record when
// the target description exists.
template <class Sink>
BuildStats build_kge(const KnowledgeGraph& graph, std::span<const Direction> directions, Sink&& sink) {
  BuildStats stats;
  for (const Entity& e : graph.entities()) {
    for (const Direction& d : directions) {
      const Lexicalization* tgt = e.lexicalization(d.tgt);
      auto names = make_task(TaskKind::KgeName, e, kNamesPid, d.src, d.tgt);
      if (!names || !tgt) {
        ++stats.missing_lexicalization;
        continue;
      }
      detail::emit(stats, sink, graph, *names, tgt->primary_name, std::nullopt);
      for (const auto& alias : tgt->aliases) detail::emit(stats, sink, graph, *names, alias, std::nullopt);
      if (tgt->description) {
        auto desc = make_task(TaskKind::KgeDescription, e, kDescriptionPid, d.src, d.tgt);
        detail::emit(stats, sink, graph, *desc, *tgt->description, std::nullopt);
      }
    }
  }
  return stats;
}

// Completion corpus: per triplet and direction, the head's source
// lexicalization queried for the tail's target surface.
template <class Sink>
BuildStats build_kgc(const KnowledgeGraph& graph, std::span<const Direction> directions, Sink&& sink) {
  BuildStats stats;
  graph.for_each_triplet([&](const Entity& head, const Relation& rel, const Entity& tail) {
    for (const Direction& d : directions) {
      auto task = make_task(TaskKind::KgcTail, head, rel.pid, d.src, d.tgt);
      if (!task || !tail.lexicalization(d.tgt)) {
        ++stats.missing_lexicalization;
        continue;
      }
      std::string target;
      try {
        target = serialize_target(tail, d.tgt);
      } catch (const DelimiterError&) {
        ++stats.rejected;
        continue;
      }
      detail::emit(stats, sink, graph, *task, std::move(target), tail.qid);
    }
  });
  return stats;
}

// Drops records that mention any held-out entity.
class ContaminationFilter {
 public:
  ContaminationFilter() = default;
  explicit ContaminationFilter(std::unordered_set<std::string> test_qids) : test_qids_(std::move(test_qids)) {}

  bool contaminated(const TrainingRecord& r) const {
    return test_qids_.contains(r.head_qid) || (r.tail_qid && test_qids_.contains(*r.tail_qid));
  }

  // Wraps `sink` so only clean records reach it.
  template <class Sink>
  auto wrap(Sink& sink) {
    return [this, &sink](TrainingRecord r) {
      if (contaminated(r)) {
        ++dropped_;
        return;
      }
      sink(std::move(r));
    };
  }

  std::size_t dropped() const noexcept { return dropped_; }

 private:
  std::unordered_set<std::string> test_qids_;
  std::size_t dropped_ = 0;
};

struct FilterResult {
  std::vector<TrainingRecord> kept;
  std::size_t dropped = 0;
};

inline FilterResult filter_contamination(std::vector<TrainingRecord> records,
                                         const std::unordered_set<std::string>& test_qids) {
  ContaminationFilter filter(test_qids);
  FilterResult out;
  out.kept.reserve(records.size());
  auto sink = [&](TrainingRecord r) { out.kept.push_back(std::move(r)); };
  auto guarded = filter.wrap(sink);
  for (auto& r : records) guarded(std::move(r));
  out.dropped = filter.dropped();
  return out;
}

struct MixConfig {
  double kgc_fraction = 0.5;
  std::uint64_t seed = 0;
  std::vector<Direction> directions;

  void validate() const {
    if (!(kgc_fraction >= 0.0 && kgc_fraction <= 1.0)) {
      throw ConfigError("kgc_fraction must lie in [0, 1], got " + std::to_string(kgc_fraction));
    }
    if (directions.empty()) throw ConfigError("at least one direction is required");
  }
};

// Seeded generator whose output depends only on the seed: mt19937_64 is fully
// specified by the standard and the bounded draw below avoids the
// implementation-defined std::uniform_int_distribution.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline std::size_t kgc_sample_size(double fraction, std::size_t kgc_count) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(kgc_count)));
}

// All KGE records plus a seeded uniform sample of round(f * |KGC|) KGC
// records, shuffled together.
inline std::vector<TrainingRecord> mix(std::vector<TrainingRecord> kgc, std::vector<TrainingRecord> kge,
                                       const MixConfig& cfg) {
  cfg.validate();
  DeterministicRng rng(cfg.seed);
  const std::size_t keep = kgc_sample_size(cfg.kgc_fraction, kgc.size());
  rng.shuffle(kgc);
  kgc.resize(keep);

  std::vector<TrainingRecord> out = std::move(kge);
  out.reserve(out.size() + kgc.size());
  for (auto& r : kgc) out.push_back(std::move(r));
  rng.shuffle(out);
  return out;
}

inline std::string to_json_line(const TrainingRecord& r) {
  nlohmann::ordered_json j;
  j["input"] = r.input_text;
  j["target"] = r.target_text;
  j["tgt_lang"] = r.tgt_lang.str();
  j["task"] = to_string(r.task);
  return j.dump();
}

// Streams records to a line-delimited training file.
class TrainingFileWriter {
 public:
  explicit TrainingFileWriter(std::ostream& out) : out_(&out) {}

  void operator()(const TrainingRecord& r) {
    *out_ << to_json_line(r) << '\n';
    ++count_;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  std::ostream* out_;
  std::size_t count_ = 0;
};

struct DatasetManifest {
  std::size_t kge_records = 0;
  std::size_t kgc_records = 0;
  std::size_t kgc_sampled = 0;
  std::size_t total = 0;
  std::size_t contamination_dropped = 0;
  std::size_t missing_lexicalization = 0;
  std::size_t rejected = 0;
  std::uint64_t seed = 0;
  double kgc_fraction = 0.0;
  std::vector<Direction> directions;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["records"] = {{"kge", kge_records}, {"kgc", kgc_records}, {"kgc_sampled", kgc_sampled}, {"total", total}};
    j["contamination_dropped"] = contamination_dropped;
    j["missing_lexicalization"] = missing_lexicalization;
    j["rejected_delimiter"] = rejected;
    j["seed"] = seed;
    j["kgc_fraction"] = kgc_fraction;
    auto dirs = nlohmann::ordered_json::array();
    for (const auto& d : directions) dirs.push_back(d.str());
    j["directions"] = std::move(dirs);
    return j;
  }
};

}  // namespace kgtrick
