// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "kgtrick/error.hpp"
#include "kgtrick/kgstore.hpp"
#include "kgtrick/language.hpp"
#include "kgtrick/text.hpp"

namespace kgtrick {

// Text grammar shared with the generation backend:
//   input  = "[" src "] " head_name [": " head_desc] " | " label " | ?"
//   output = name [" | " description]
inline constexpr std::string_view kDelimiter = " | ";
inline constexpr std::string_view kQuerySuffix = " | ?";
inline constexpr std::string_view kHeadDescSeparator = ": ";

enum class TaskKind : std::uint8_t { KgcTail, KgeName, KgeDescription };

inline std::string_view to_string(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::KgcTail: return "kgc_tail";
    case TaskKind::KgeName: return "kge_name";
    case TaskKind::KgeDescription: return "kge_description";
  }
  return "kgc_tail";
}

inline std::optional<TaskKind> parse_task_kind(std::string_view text) noexcept {
  if (text == "kgc_tail") return TaskKind::KgcTail;
  if (text == "kge_name") return TaskKind::KgeName;
  if (text == "kge_description") return TaskKind::KgeDescription;
  return std::nullopt;
}

inline TaskKind kind_for_relation(std::string_view pid) noexcept {
  if (pid == kNamesPid) return TaskKind::KgeName;
  if (pid == kDescriptionPid) return TaskKind::KgeDescription;
  return TaskKind::KgcTail;
}

struct TargetSurface {
  std::string name;
  std::optional<std::string> description;

  friend bool operator==(const TargetSurface&, const TargetSurface&) = default;
};

// The five-element query (src, tgt, head, relation, ?) plus its task kind.
struct TaskTuple {
  TaskKind kind = TaskKind::KgcTail;
  LanguageCode src;
  LanguageCode tgt;
  std::string head_qid;
  std::string head_name;
  std::optional<std::string> head_desc;
  std::string rel_pid;
  std::optional<TargetSurface> gold;
};

// Counts occurrences of the delimiter, overlapping ones included.
inline std::size_t count_delimiters(std::string_view text) noexcept {
  std::size_t n = 0;
  for (auto pos = text.find(kDelimiter); pos != std::string_view::npos; pos = text.find(kDelimiter, pos + 1)) {
    ++n;
  }
  return n;
}

// Label in `lang`, else the English label, else the pid itself.
inline std::string relation_label(const KnowledgeGraph& graph, std::string_view pid, const LanguageCode& lang) {
  if (const Relation* rel = graph.find_relation(pid)) {
    if (const auto* label = rel->label(lang)) return *label;
    if (const auto* label = rel->label(kEnglish)) return *label;
  } else {
    const auto& seeded = seeded_labels(pid);
    if (auto it = seeded.find(lang); it != seeded.end()) return it->second;
    if (auto it = seeded.find(kEnglish); it != seeded.end()) return it->second;
  }
  return std::string(pid);
}

namespace detail {

inline void reject_delimiter(std::string_view field, std::string_view what) {
  if (field.find(kDelimiter) != std::string_view::npos) {
    throw DelimiterError(std::string(what) + " contains the reserved delimiter: '" + std::string(field) + "'");
  }
}

}  // namespace detail

inline std::string serialize_input(const TaskTuple& t, const KnowledgeGraph& graph) {
  if (trim(t.head_name).empty()) throw ValidationError("empty head name for " + t.head_qid);
  if (kind_for_relation(t.rel_pid) != t.kind) {
    throw ValidationError("relation '" + t.rel_pid + "' does not match task " + std::string(to_string(t.kind)));
  }
  if (t.kind == TaskKind::KgeDescription && t.head_desc) {
    throw ValidationError("description queries carry the head name only");
  }
  const std::string label = relation_label(graph, t.rel_pid, t.src);
  detail::reject_delimiter(t.head_name, "head name");
  if (t.head_desc) detail::reject_delimiter(*t.head_desc, "head description");
  detail::reject_delimiter(label, "relation label");

  std::string out;
  out.reserve(8 + t.head_name.size() + label.size() + (t.head_desc ? t.head_desc->size() + 2 : 0));
  out.append("[").append(t.src.view()).append("] ").append(t.head_name);
  if (t.head_desc) out.append(kHeadDescSeparator).append(*t.head_desc);
  out.append(kDelimiter).append(label).append(kQuerySuffix);
  // Fields ending or starting with a bare pipe can still fuse into extra delimiters.
  if (count_delimiters(out) != 2) throw DelimiterError("fields form an extra delimiter in '" + out + "'");
  return out;
}

// Splits on the first delimiter; no delimiter means the whole text is a name.
inline TargetSurface parse_output(std::string_view text) {
  const auto cut = text.find(kDelimiter);
  const auto name = trim(text.substr(0, cut));
  if (name.empty()) throw ParseError("no entity name in generated text '" + std::string(text) + "'");
  TargetSurface surface{std::string(name), std::nullopt};
  if (cut != std::string_view::npos) {
    const auto desc = trim(text.substr(cut + kDelimiter.size()));
    if (!desc.empty()) surface.description = std::string(desc);
  }
  return surface;
}

// True when render() and parse_output() are exact inverses on `s`.
inline bool is_valid_surface(const TargetSurface& s) {
  auto clean = [](std::string_view f) { return !f.empty() && trim(f) == f && f.find(kDelimiter) == f.npos; };
  if (!clean(s.name) || s.name.ends_with(" |")) return false;
  return !s.description || clean(*s.description);
}

inline std::string render(const TargetSurface& s) {
  detail::reject_delimiter(s.name, "name");
  if (!s.description) return s.name;
  std::string out = s.name;
  out.append(kDelimiter).append(*s.description);
  return out;
}

// "{name} | {description}" or "{name}" for the entity's lexicalization in `lang`.
inline std::string serialize_target(const Entity& e, const LanguageCode& lang) {
  const Lexicalization* lex = e.lexicalization(lang);
  if (!lex) throw MissingLexicalizationError(e.qid + " has no lexicalization in " + lang.str());
  if (lex->description) detail::reject_delimiter(*lex->description, "description");
  return render({lex->primary_name, lex->description});
}

// Builds the query tuple for `head`, or nothing when it lacks a `src` name.
inline std::optional<TaskTuple> make_task(TaskKind kind, const Entity& head, std::string_view pid,
                                          const LanguageCode& src, const LanguageCode& tgt) {
  const Lexicalization* lex = head.lexicalization(src);
  if (!lex) return std::nullopt;
  TaskTuple t{kind, src, tgt, head.qid, lex->primary_name, std::nullopt, std::string(pid), std::nullopt};
  if (kind != TaskKind::KgeDescription) t.head_desc = lex->description;
  return t;
}

// Inverse of serialize_input, up to the head name/description split.
struct ParsedInput {
  LanguageCode src;
  std::string head_text;
  std::string label;
};

inline std::optional<ParsedInput> parse_input(std::string_view text) {
  if (text.size() < 5 || text[0] != '[' || text[3] != ']' || text[4] != ' ') return std::nullopt;
  if (!LanguageCode::is_well_formed(text.substr(1, 2)) || !text.ends_with(kQuerySuffix)) return std::nullopt;
  auto body = text.substr(5, text.size() - 5 - kQuerySuffix.size());
  const auto cut = body.find(kDelimiter);
  if (cut == std::string_view::npos) return std::nullopt;
  return ParsedInput{LanguageCode(text.substr(1, 2)), std::string(body.substr(0, cut)),
                     std::string(body.substr(cut + kDelimiter.size()))};
}

}  // namespace kgtrick
