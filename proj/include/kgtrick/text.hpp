// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "kgtrick/error.hpp"
#include "kgtrick/language.hpp"

namespace kgtrick {

namespace detail {

inline bool is_ascii(std::string_view text) noexcept {
  for (unsigned char c : text) {
    if (c >= 0x80) return false;
  }
  return true;
}

inline bool is_ascii_space(char c) noexcept {
  return c == ' ' || (c >= '\t' && c <= '\r');
}

// NFKC_Casefold of pure ASCII is plain lowercasing.
inline std::string normalize_ascii(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_ascii_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

inline std::string normalize_icu(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc_cf = icu::Normalizer2::getNFKCCasefoldInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFKC_Casefold normalizer unavailable");

  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString folded = nfkc_cf->normalize(source, status);
  if (U_FAILURE(status)) throw Error("ICU normalization failed");

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < folded.length();) {
    const UChar32 cp = folded.char32At(i);
    i += U16_LENGTH(cp);
    if (u_isUWhiteSpace(cp)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) {
      collapsed.append(static_cast<UChar>(u' '));
      pending_space = false;
    }
    collapsed.append(cp);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

}  // namespace detail

// Compatibility normalization plus case folding, then whitespace trimmed and
// collapsed to single spaces. Caseless scripts pass through folding unchanged.
// The language is part of the contract but no configured language needs
// tailored folding.
inline std::string normalize(std::string_view text, const LanguageCode& /*lang*/) {
  if (detail::is_ascii(text)) return detail::normalize_ascii(text);
  return detail::normalize_icu(text);
}

// Normalized tokens: whitespace-separated words, or single code points for
// scripts written without word spacing.
inline std::vector<std::string> tokenize(std::string_view text, const LanguageCode& lang) {
  const std::string norm = normalize(text, lang);
  std::vector<std::string> tokens;
  if (lang.is_unsegmented()) {
    const auto* bytes = reinterpret_cast<const uint8_t*>(norm.data());
    const auto length = static_cast<int32_t>(norm.size());
    for (int32_t i = 0; i < length;) {
      const int32_t start = i;
      UChar32 cp = 0;
      U8_NEXT(bytes, i, length, cp);
      if (cp >= 0 && u_isUWhiteSpace(cp)) continue;
      tokens.emplace_back(norm, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
    }
    return tokens;
  }
  std::size_t pos = 0;
  while (pos < norm.size()) {
    const std::size_t next = norm.find(' ', pos);
    const std::size_t end = next == std::string::npos ? norm.size() : next;
    if (end > pos) tokens.emplace_back(norm, pos, end - pos);
    pos = end + 1;
  }
  return tokens;
}

inline std::string_view trim(std::string_view text) noexcept {
  while (!text.empty() && detail::is_ascii_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && detail::is_ascii_space(text.back())) text.remove_suffix(1);
  return text;
}

}  // namespace kgtrick
