// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "kgtrick/error.hpp"
#include "kgtrick/kgstore.hpp"

namespace kgtrick {

// Snapshot layout, one JSON value per line:
//   {"format":"kgtrick-snapshot","version":1,"languages":[...],"entities":N,"relations":M,"triplets":T}
//   {"kind":"relation","pid":...,"labels":{...}}          x M
//   {"kind":"entity","qid":...,"tier":...,"lex":{...}}    x N
//   ["head","rel","tail"]                                 x T
// Order follows the graph, so equal graphs produce byte-identical files.
inline constexpr std::string_view kSnapshotFormat = "kgtrick-snapshot";
inline constexpr int kSnapshotVersion = 1;

inline void write_snapshot(const KnowledgeGraph& graph, std::ostream& out) {
  using nlohmann::json;
  json header = {{"format", kSnapshotFormat},
                 {"version", kSnapshotVersion},
                 {"entities", graph.entity_count()},
                 {"relations", graph.relation_count()},
                 {"triplets", graph.triplet_count()}};
  json langs = json::array();
  for (const auto& l : graph.languages().codes()) langs.push_back(l.str());
  header["languages"] = std::move(langs);
  out << header.dump() << '\n';

  for (const auto& rel : graph.relations()) {
    json labels = json::object();
    for (const auto& [lang, label] : rel.labels) labels[lang.str()] = label;
    out << json{{"kind", "relation"}, {"pid", rel.pid}, {"labels", std::move(labels)}}.dump() << '\n';
  }
  for (const auto& e : graph.entities()) {
    json lex = json::object();
    for (const auto& [lang, l] : e.lex) {
      json entry = {{"name", l.primary_name}, {"aliases", l.aliases}};
      if (l.description) entry["description"] = *l.description;
      lex[lang.str()] = std::move(entry);
    }
    out << json{{"kind", "entity"}, {"qid", e.qid}, {"tier", to_string(e.tier)}, {"lex", std::move(lex)}}.dump()
        << '\n';
  }
  graph.for_each_triplet([&](const Entity& h, const Relation& r, const Entity& t) {
    out << json::array({h.qid, r.pid, t.qid}).dump() << '\n';
  });
}

inline void write_snapshot(const KnowledgeGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_snapshot(graph, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline KnowledgeGraph read_snapshot(std::istream& in) {
  using nlohmann::json;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty snapshot");
  const auto header = json::parse(line);
  if (header.value("format", "") != kSnapshotFormat || header.value("version", 0) != kSnapshotVersion) {
    throw ValidationError("not a kgtrick snapshot (or unsupported version)");
  }
  GraphBuilder builder(LanguageSet(header.at("languages").get<std::vector<std::string>>()));
  const auto& langs = builder.languages();
  const auto n_rel = header.at("relations").get<std::size_t>();
  const auto n_ent = header.at("entities").get<std::size_t>();
  const auto n_tri = header.at("triplets").get<std::size_t>();

  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw ValidationError(std::string("truncated snapshot: missing ") + what);
    return json::parse(line);
  };
  for (std::size_t i = 0; i < n_rel; ++i) {
    const auto j = next("relation");
    const auto pid = j.at("pid").get<std::string>();
    builder.declare_relation(pid);
    for (const auto& [code, label] : j.at("labels").items()) {
      builder.set_relation_label(pid, langs.require(code), label.get<std::string>());
    }
  }
  for (std::size_t i = 0; i < n_ent; ++i) {
    const auto j = next("entity");
    const auto qid = j.at("qid").get<std::string>();
    auto tier = parse_tier(j.at("tier").get<std::string>());
    if (!tier) throw ValidationError("bad tier in snapshot");
    builder.set_tier(qid, *tier);
    for (const auto& [code, l] : j.at("lex").items()) {
      builder.set_lexicalization(qid, langs.require(code),
                                 {l.at("name").get<std::string>(), detail::string_array(l, "aliases"),
                                  detail::optional_string(l, "description")});
    }
  }
  for (std::size_t i = 0; i < n_tri; ++i) {
    const auto j = next("triplet");
    builder.add_triplet(j.at(0).get<std::string>(), j.at(1).get<std::string>(), j.at(2).get<std::string>());
  }
  return std::move(builder).freeze();
}

inline KnowledgeGraph read_snapshot(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_snapshot(in);
}

}  // namespace kgtrick
