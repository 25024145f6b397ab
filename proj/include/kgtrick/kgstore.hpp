// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgtrick/error.hpp"
#include "kgtrick/language.hpp"
#include "kgtrick/text.hpp"

namespace kgtrick {

// Popularity band of an entity in the benchmark: top-10%, 10-50%, rest.
enum class Tier : std::uint8_t { Head, Torso, Tail, Unknown };

inline std::string_view to_string(Tier tier) noexcept {
  switch (tier) {
    case Tier::Head: return "head";
    case Tier::Torso: return "torso";
    case Tier::Tail: return "tail";
    case Tier::Unknown: break;
  }
  return "unknown";
}

inline std::optional<Tier> parse_tier(std::string_view text) noexcept {
  if (text == "head") return Tier::Head;
  if (text == "torso") return Tier::Torso;
  if (text == "tail") return Tier::Tail;
  if (text == "unknown") return Tier::Unknown;
  return std::nullopt;
}

// Orders IDs like Q2 < Q10 numerically when they share a letter prefix;
// IDs whose suffix is not a plain number sort after the numeric ones.
// Compares the tuple (prefix, non-numeric, digit count, digits, full text),
// which is a strict weak ordering.
inline bool qid_less(std::string_view a, std::string_view b) noexcept {
  struct Key {
    std::string_view prefix;
    bool non_numeric;
    std::string_view digits;  // leading zeros stripped; empty when non-numeric
    std::string_view full;
  };
  auto key = [](std::string_view id) {
    std::size_t i = 0;
    while (i < id.size() && !(id[i] >= '0' && id[i] <= '9')) ++i;
    const auto rest = id.substr(i);
    const bool numeric =
        !rest.empty() && std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; });
    std::string_view digits;
    if (numeric) {
      const auto nz = rest.find_first_not_of('0');
      digits = nz == std::string_view::npos ? std::string_view{} : rest.substr(nz);
    }
    return Key{id.substr(0, i), !numeric, digits, id};
  };
  const Key ka = key(a);
  const Key kb = key(b);
  if (ka.prefix != kb.prefix) return ka.prefix < kb.prefix;
  if (ka.non_numeric != kb.non_numeric) return !ka.non_numeric;
  if (ka.digits.size() != kb.digits.size()) return ka.digits.size() < kb.digits.size();
  if (ka.digits != kb.digits) return ka.digits < kb.digits;
  return ka.full < kb.full;
}

struct QidLess {
  bool operator()(std::string_view a, std::string_view b) const noexcept { return qid_less(a, b); }
};

struct Lexicalization {
  std::string primary_name;
  std::vector<std::string> aliases;
  std::optional<std::string> description;

  friend bool operator==(const Lexicalization&, const Lexicalization&) = default;
};

// Removes aliases that normalize to the primary name or to an earlier alias.
// Returns how many were dropped.
inline std::size_t sanitize_aliases(Lexicalization& lex, const LanguageCode& lang) {
  std::unordered_set<std::string> seen{normalize(lex.primary_name, lang)};
  const auto before = lex.aliases.size();
  std::erase_if(lex.aliases, [&](const std::string& alias) {
    auto norm = normalize(alias, lang);
    return norm.empty() || !seen.insert(std::move(norm)).second;
  });
  return before - lex.aliases.size();
}

struct Entity {
  std::string qid;
  std::map<LanguageCode, Lexicalization> lex;
  Tier tier = Tier::Unknown;

  const Lexicalization* lexicalization(const LanguageCode& lang) const {
    auto it = lex.find(lang);
    return it == lex.end() ? nullptr : &it->second;
  }
};

struct Relation {
  std::string pid;
  std::map<LanguageCode, std::string> labels;

  const std::string* label(const LanguageCode& lang) const {
    auto it = labels.find(lang);
    return it == labels.end() ? nullptr : &it->second;
  }
};

struct Triplet {
  std::string head;
  std::string rel;
  std::string tail;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Pseudo-relations used by the enhancement tasks.
inline constexpr std::string_view kNamesPid = "_names";
inline constexpr std::string_view kDescriptionPid = "_description";

inline bool is_pseudo_relation(std::string_view pid) noexcept {
  return pid == kNamesPid || pid == kDescriptionPid;
}

inline const std::map<LanguageCode, std::string>& seeded_labels(std::string_view pid) {
  static const std::map<LanguageCode, std::string> names = {
      {LanguageCode("ar"), "أسماء"},  {LanguageCode("de"), "namen"},
      {LanguageCode("en"), "names"},  {LanguageCode("es"), "nombres"},
      {LanguageCode("fr"), "noms"},   {LanguageCode("it"), "nomi"},
      {LanguageCode("ja"), "名前"},   {LanguageCode("ko"), "이름"},
      {LanguageCode("th"), "ชื่อ"},    {LanguageCode("zh"), "名称"},
  };
  static const std::map<LanguageCode, std::string> descriptions = {
      {LanguageCode("ar"), "وصف"},         {LanguageCode("de"), "beschreibung"},
      {LanguageCode("en"), "description"}, {LanguageCode("es"), "descripción"},
      {LanguageCode("fr"), "description"}, {LanguageCode("it"), "descrizione"},
      {LanguageCode("ja"), "説明"},        {LanguageCode("ko"), "설명"},
      {LanguageCode("th"), "คำอธิบาย"},     {LanguageCode("zh"), "描述"},
  };
  static const std::map<LanguageCode, std::string> none;
  if (pid == kNamesPid) return names;
  if (pid == kDescriptionPid) return descriptions;
  return none;
}

// Relation IDs look like P26; lexical records with such IDs label relations.
inline bool looks_like_pid(std::string_view id) noexcept {
  if (is_pseudo_relation(id)) return true;
  if (id.size() < 2 || id[0] != 'P') return false;
  return std::all_of(id.begin() + 1, id.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Outcome of one ingestion pass.
struct IngestReport {
  static constexpr std::size_t kMaxRecordedLines = 100;

  std::size_t added = 0;
  std::size_t skipped = 0;
  std::size_t duplicates = 0;
  std::size_t aliases_dropped = 0;
  std::vector<std::size_t> skipped_lines;  // 1-based, first kMaxRecordedLines only
  std::vector<std::string> warnings;       // first kMaxRecordedLines only

  void skip(std::size_t line, std::string why) {
    ++skipped;
    if (skipped_lines.size() < kMaxRecordedLines) {
      skipped_lines.push_back(line);
      warnings.push_back("line " + std::to_string(line) + ": " + std::move(why));
    }
  }
};

// One WikiKGE-style benchmark row.
struct BenchmarkRecord {
  std::string qid;
  LanguageCode lang;
  Tier tier = Tier::Unknown;
  std::vector<std::string> correct_names;
  std::vector<std::string> incorrect_names;
  std::optional<std::string> gold_description;
};

namespace detail {

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return in;
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline std::vector<std::string> string_array(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw ValidationError(std::string("field '") + key + "' is not an array");
  for (const auto& v : *it) out.push_back(v.get<std::string>());
  return out;
}

inline std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  auto text = it->get<std::string>();
  if (trim(text).empty()) return std::nullopt;
  return text;
}

inline std::optional<std::array<std::string_view, 3>> split_triplet_line(std::string_view line) {
  const auto t1 = line.find('\t');
  const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
  if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos ||
      t1 == 0 || t2 == t1 + 1 || t2 + 1 == line.size()) {
    return std::nullopt;
  }
  return std::array{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
}

}  // namespace detail

inline BenchmarkRecord parse_benchmark_record(std::string_view line, const LanguageSet& languages) {
  const auto j = nlohmann::json::parse(line);
  BenchmarkRecord rec;
  rec.qid = j.at("qid").get<std::string>();
  rec.lang = languages.require(j.at("lang").get<std::string>());
  if (auto it = j.find("tier"); it != j.end() && !it->is_null()) {
    auto tier = parse_tier(it->get<std::string>());
    if (!tier) throw ValidationError("unknown tier '" + it->get<std::string>() + "'");
    rec.tier = *tier;
  }
  rec.correct_names = detail::string_array(j, "correct_names");
  rec.incorrect_names = detail::string_array(j, "incorrect_names");
  rec.gold_description = detail::optional_string(j, "gold_description");
  if (rec.qid.empty()) throw ValidationError("empty qid");
  return rec;
}

inline std::vector<BenchmarkRecord> read_benchmark(std::istream& in, const LanguageSet& languages,
                                                   IngestReport* report = nullptr) {
  std::vector<BenchmarkRecord> records;
  IngestReport local;
  IngestReport& rep = report ? *report : local;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    detail::strip_cr(line);
    if (trim(line).empty()) continue;
    try {
      records.push_back(parse_benchmark_record(line, languages));
      ++rep.added;
    } catch (const std::exception& e) {
      rep.skip(lineno, e.what());
    }
  }
  return records;
}

inline std::vector<BenchmarkRecord> read_benchmark(const std::filesystem::path& path,
                                                   const LanguageSet& languages,
                                                   IngestReport* report = nullptr) {
  auto in = detail::open_input(path);
  return read_benchmark(in, languages, report);
}

// Reads head<TAB>rel<TAB>tail lines without touching a graph.
inline std::vector<Triplet> read_triplets(std::istream& in, IngestReport* report = nullptr) {
  std::vector<Triplet> out;
  IngestReport local;
  IngestReport& rep = report ? *report : local;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_triplet_line(line);
    if (!fields) {
      rep.skip(lineno, "expected exactly 3 tab-separated fields");
      continue;
    }
    const auto& [h, r, t] = *fields;
    out.push_back({std::string(h), std::string(r), std::string(t)});
    ++rep.added;
  }
  return out;
}

inline std::vector<Triplet> read_triplets(const std::filesystem::path& path,
                                          IngestReport* report = nullptr) {
  auto in = detail::open_input(path);
  return read_triplets(in, report);
}

class GraphBuilder;

// Frozen multilingual graph. Immutable after construction, so any number of
// threads may read it concurrently.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  const LanguageSet& languages() const noexcept { return languages_; }

  std::size_t entity_count() const noexcept { return entities_.size(); }
  std::size_t relation_count() const noexcept { return relations_.size(); }
  std::size_t triplet_count() const noexcept { return triplets_.size(); }

  std::span<const Entity> entities() const noexcept { return entities_; }
  std::span<const Relation> relations() const noexcept { return relations_; }

  const Entity* find_entity(std::string_view qid) const {
    auto it = entity_ids_.find(std::string(qid));
    return it == entity_ids_.end() ? nullptr : &entities_[it->second];
  }

  const Relation* find_relation(std::string_view pid) const {
    auto it = relation_ids_.find(std::string(pid));
    return it == relation_ids_.end() ? nullptr : &relations_[it->second];
  }

  Triplet triplet(std::size_t i) const {
    const Edge& e = triplets_.at(i);
    return {entities_[e.head].qid, relations_[e.rel].pid, entities_[e.tail].qid};
  }

  // Calls fn(head, relation, tail) for each triplet in ingestion order.
  template <class Fn>
  void for_each_triplet(Fn&& fn) const {
    for (const Edge& e : triplets_) fn(entities_[e.head], relations_[e.rel], entities_[e.tail]);
  }

  // All entities whose primary name or an alias in `lang` normalizes like
  // `raw_name`, ordered by qid.
  std::vector<const Entity*> lookup_entities(const LanguageCode& lang, std::string_view raw_name) const {
    std::vector<const Entity*> out;
    auto it = name_index_.find(name_key(lang, normalize(raw_name, lang)));
    if (it == name_index_.end()) return out;
    out.reserve(it->second.size());
    for (auto id : it->second) out.push_back(&entities_[id]);
    return out;
  }

  std::vector<std::string> lookup_name(const LanguageCode& lang, std::string_view raw_name) const {
    std::vector<std::string> out;
    for (const Entity* e : lookup_entities(lang, raw_name)) out.push_back(e->qid);
    return out;
  }

  std::vector<const Entity*> known_tail_entities(std::string_view head, std::string_view pid) const {
    std::vector<const Entity*> out;
    auto h = entity_ids_.find(std::string(head));
    auto r = relation_ids_.find(std::string(pid));
    if (h == entity_ids_.end() || r == relation_ids_.end()) return out;
    const Edge lo{h->second, r->second, 0};
    for (auto it = std::lower_bound(adjacency_.begin(), adjacency_.end(), lo);
         it != adjacency_.end() && it->head == lo.head && it->rel == lo.rel; ++it) {
      out.push_back(&entities_[it->tail]);
    }
    std::sort(out.begin(), out.end(),
              [](const Entity* a, const Entity* b) { return qid_less(a->qid, b->qid); });
    return out;
  }

  // Tails recorded for (head, pid), ordered by qid.
  std::vector<std::string> known_tails(std::string_view head, std::string_view pid) const {
    std::vector<std::string> out;
    for (const Entity* e : known_tail_entities(head, pid)) out.push_back(e->qid);
    return out;
  }

  std::size_t lexicalization_count() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entities_) n += e.lex.size();
    return n;
  }

 private:
  friend class GraphBuilder;

  struct Edge {
    std::uint32_t head;
    std::uint32_t rel;
    std::uint32_t tail;
    friend auto operator<=>(const Edge&, const Edge&) = default;
  };

  static std::string name_key(const LanguageCode& lang, std::string_view normalized) {
    std::string key(lang.view());
    key.push_back('\x1f');
    key.append(normalized);
    return key;
  }

  LanguageSet languages_;
  std::vector<Entity> entities_;
  std::vector<Relation> relations_;
  std::unordered_map<std::string, std::uint32_t> entity_ids_;
  std::unordered_map<std::string, std::uint32_t> relation_ids_;
  std::vector<Edge> triplets_;
  std::vector<Edge> adjacency_;  // sorted, unique
  std::unordered_map<std::string, std::vector<std::uint32_t>> name_index_;
};

// Single-writer ingestion front end. freeze() hands the data to an immutable
// KnowledgeGraph; the builder is spent afterwards.
class GraphBuilder {
 public:
  explicit GraphBuilder(LanguageSet languages = LanguageSet::defaults()) {
    graph_.languages_ = std::move(languages);
    for (auto pid : {kNamesPid, kDescriptionPid}) {
      auto& rel = graph_.relations_[intern_relation(pid)];
      for (const auto& [lang, label] : seeded_labels(pid)) {
        if (graph_.languages_.contains(lang)) rel.labels.emplace(lang, label);
      }
    }
  }

  const LanguageSet& languages() const noexcept { return graph_.languages_; }

  // Returns false when the triplet was already present.
  bool add_triplet(std::string_view head, std::string_view rel, std::string_view tail) {
    const KnowledgeGraph::Edge edge{intern_entity(head), intern_relation(rel), intern_entity(tail)};
    if (!edge_set_.insert(pack(edge)).second) return false;
    graph_.triplets_.push_back(edge);
    return true;
  }

  // Stores a lexicalization, replacing any earlier one for (qid, lang).
  // Returns the number of aliases dropped by sanitization.
  std::size_t set_lexicalization(std::string_view qid, const LanguageCode& lang, Lexicalization lex) {
    if (!graph_.languages_.contains(lang)) {
      throw ValidationError("language '" + lang.str() + "' is not configured");
    }
    if (trim(lex.primary_name).empty()) throw ValidationError("empty primary name for " + std::string(qid));
    if (lex.description && trim(*lex.description).empty()) lex.description.reset();
    const auto dropped = sanitize_aliases(lex, lang);
    graph_.entities_[intern_entity(qid)].lex[lang] = std::move(lex);
    return dropped;
  }

  void set_relation_label(std::string_view pid, const LanguageCode& lang, std::string label) {
    if (trim(label).empty()) throw ValidationError("empty label for " + std::string(pid));
    graph_.relations_[intern_relation(pid)].labels[lang] = std::move(label);
  }

  void declare_relation(std::string_view pid) { intern_relation(pid); }

  void set_tier(std::string_view qid, Tier tier) { graph_.entities_[intern_entity(qid)].tier = tier; }

  void apply_tiers(std::span<const BenchmarkRecord> records) {
    for (const auto& rec : records) set_tier(rec.qid, rec.tier);
  }

  IngestReport ingest_triplets(std::istream& in) {
    IngestReport report;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      detail::strip_cr(line);
      if (line.empty()) continue;
      const auto fields = detail::split_triplet_line(line);
      if (!fields) {
        report.skip(lineno, "expected exactly 3 tab-separated fields");
        continue;
      }
      const auto& [h, r, t] = *fields;
      if (add_triplet(h, r, t)) {
        ++report.added;
      } else {
        ++report.duplicates;
      }
    }
    return report;
  }

  IngestReport ingest_triplets(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return ingest_triplets(in);
  }

  // Line-delimited {qid, lang, name, aliases[], description?} records.
  // Records whose id is a relation ID label that relation instead.
  IngestReport ingest_lexical(std::istream& in) {
    IngestReport report;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      detail::strip_cr(line);
      if (trim(line).empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        const auto id = j.at("qid").get<std::string>();
        const auto code = j.at("lang").get<std::string>();
        const auto lang = graph_.languages_.parse(code);
        if (!lang) {
          report.skip(lineno, "language '" + code + "' is not configured");
          continue;
        }
        if (id.empty()) throw ValidationError("empty qid");
        if (looks_like_pid(id)) {
          set_relation_label(id, *lang, j.at("name").get<std::string>());
        } else {
          Lexicalization lex{j.at("name").get<std::string>(), detail::string_array(j, "aliases"),
                             detail::optional_string(j, "description")};
          report.aliases_dropped += set_lexicalization(id, *lang, std::move(lex));
        }
        ++report.added;
      } catch (const std::exception& e) {
        report.skip(lineno, e.what());
      }
    }
    return report;
  }

  IngestReport ingest_lexical(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return ingest_lexical(in);
  }

  // Builds lookup indices and returns the immutable graph.
  KnowledgeGraph freeze() && {
    edge_set_ = {};
    auto& g = graph_;
    g.adjacency_ = g.triplets_;
    std::sort(g.adjacency_.begin(), g.adjacency_.end());
    for (std::uint32_t id = 0; id < g.entities_.size(); ++id) {
      for (const auto& [lang, lex] : g.entities_[id].lex) {
        add_name(lang, lex.primary_name, id);
        for (const auto& alias : lex.aliases) add_name(lang, alias, id);
      }
    }
    for (auto& [key, ids] : g.name_index_) {
      std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
        return qid_less(g.entities_[a].qid, g.entities_[b].qid);
      });
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    return std::move(graph_);
  }

 private:
  static std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  struct EdgeKey {
    std::uint64_t head_rel;
    std::uint32_t tail;
    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  };
  struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.head_rel * 0x9E3779B97F4A7C15ULL ^ k.tail);
    }
  };

  static EdgeKey pack(const KnowledgeGraph::Edge& e) { return {pack_pair(e.head, e.rel), e.tail}; }

  std::uint32_t intern_entity(std::string_view qid) {
    auto [it, inserted] = graph_.entity_ids_.try_emplace(std::string(qid),
                                                         static_cast<std::uint32_t>(graph_.entities_.size()));
    if (inserted) graph_.entities_.push_back(Entity{std::string(qid), {}, Tier::Unknown});
    return it->second;
  }

  std::uint32_t intern_relation(std::string_view pid) {
    auto [it, inserted] = graph_.relation_ids_.try_emplace(
        std::string(pid), static_cast<std::uint32_t>(graph_.relations_.size()));
    if (inserted) graph_.relations_.push_back(Relation{std::string(pid), {}});
    return it->second;
  }

  void add_name(const LanguageCode& lang, std::string_view name, std::uint32_t id) {
    auto norm = normalize(name, lang);
    if (norm.empty()) return;
    graph_.name_index_[KnowledgeGraph::name_key(lang, norm)].push_back(id);
  }

  KnowledgeGraph graph_;
  std::unordered_set<EdgeKey, EdgeKeyHash> edge_set_;
};

}  // namespace kgtrick
