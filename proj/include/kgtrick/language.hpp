// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kgtrick/error.hpp"

namespace kgtrick {

// Two-letter lowercase language tag such as "en" or "zh".
class LanguageCode {
 public:
  LanguageCode() = default;

  explicit LanguageCode(std::string_view code) {
    if (!is_well_formed(code)) {
      throw ValidationError("malformed language code '" + std::string(code) + "'");
    }
    code_ = {code[0], code[1]};
  }

  static bool is_well_formed(std::string_view code) noexcept {
    return code.size() == 2 && code[0] >= 'a' && code[0] <= 'z' && code[1] >= 'a' &&
           code[1] <= 'z';
  }

  std::string str() const { return {code_[0], code_[1]}; }
  std::string_view view() const noexcept { return {code_.data(), code_.size()}; }

  // zh, ja and th are written without spaces between words.
  bool is_unsegmented() const noexcept {
    const auto v = view();
    return v == "zh" || v == "ja" || v == "th";
  }

  friend auto operator<=>(const LanguageCode&, const LanguageCode&) = default;

  friend std::ostream& operator<<(std::ostream& os, const LanguageCode& lang) {
    return os << lang.view();
  }

 private:
  std::array<char, 2> code_{'?', '?'};
};

inline const LanguageCode kEnglish{"en"};

// The configured language inventory. Ordered; membership is exact.
class LanguageSet {
 public:
  LanguageSet() = default;

  LanguageSet(std::initializer_list<std::string_view> codes) {
    for (auto c : codes) add(LanguageCode(c));
  }

  explicit LanguageSet(const std::vector<std::string>& codes) {
    for (const auto& c : codes) add(LanguageCode(c));
  }

  static LanguageSet defaults() {
    return {"ar", "de", "en", "es", "fr", "it", "ja", "ko", "th", "zh"};
  }

  void add(LanguageCode lang) {
    auto it = std::lower_bound(codes_.begin(), codes_.end(), lang);
    if (it == codes_.end() || *it != lang) codes_.insert(it, lang);
  }

  bool contains(const LanguageCode& lang) const {
    return std::binary_search(codes_.begin(), codes_.end(), lang);
  }

  // Parses and checks membership in one step.
  std::optional<LanguageCode> parse(std::string_view code) const {
    if (!LanguageCode::is_well_formed(code)) return std::nullopt;
    LanguageCode lang(code);
    if (!contains(lang)) return std::nullopt;
    return lang;
  }

  LanguageCode require(std::string_view code) const {
    auto lang = parse(code);
    if (!lang) throw ValidationError("language '" + std::string(code) + "' is not configured");
    return *lang;
  }

  const std::vector<LanguageCode>& codes() const noexcept { return codes_; }
  std::size_t size() const noexcept { return codes_.size(); }
  bool empty() const noexcept { return codes_.empty(); }

 private:
  std::vector<LanguageCode> codes_;
};

}  // namespace kgtrick

template <>
struct std::hash<kgtrick::LanguageCode> {
  std::size_t operator()(const kgtrick::LanguageCode& lang) const noexcept {
    return std::hash<std::string_view>{}(lang.view());
  }
};
