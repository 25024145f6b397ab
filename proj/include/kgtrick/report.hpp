// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace kgtrick {

inline constexpr std::string_view kAll = "all";

struct ReportCell {
  std::string language;
  std::string tier;
  std::string metric;
  double value = 0.0;
  std::size_t count = 0;
};

// Metric table keyed by (language, tier, metric). "all" is the rollup value
// on either axis.
class EvalReport {
 public:
  EvalReport() = default;
  explicit EvalReport(std::string task) : task_(std::move(task)) {}

  const std::string& task() const noexcept { return task_; }

  void add(ReportCell cell) { cells_.push_back(std::move(cell)); }
  void note(std::string text) { notes_.push_back(std::move(text)); }

  const std::vector<ReportCell>& cells() const noexcept { return cells_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }

  const ReportCell* find(std::string_view language, std::string_view tier, std::string_view metric) const {
    for (const auto& c : cells_) {
      if (c.language == language && c.tier == tier && c.metric == metric) return &c;
    }
    return nullptr;
  }

  std::optional<double> value(std::string_view language, std::string_view tier, std::string_view metric) const {
    const auto* c = find(language, tier, metric);
    return c ? std::optional<double>(c->value) : std::nullopt;
  }

  void write_jsonl(std::ostream& out) const {
    for (const auto& c : cells_) {
      nlohmann::ordered_json j;
      j["language"] = c.language;
      j["tier"] = c.tier;
      j["metric"] = c.metric;
      j["value"] = c.value;
      j["count"] = c.count;
      out << j.dump() << '\n';
    }
  }

  // One row per (language, tier), one column per metric, values on a 0-1
  // scale with three decimals; the last column is the row's item count.
  std::string render_table() const {
    std::vector<std::string> metrics;
    std::vector<std::pair<std::string, std::string>> rows;
    std::map<std::pair<std::string, std::string>, std::map<std::string, const ReportCell*>> grid;
    for (const auto& c : cells_) {
      if (std::find(metrics.begin(), metrics.end(), c.metric) == metrics.end()) metrics.push_back(c.metric);
      std::pair<std::string, std::string> row{c.language, c.tier};
      if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
      grid[row][c.metric] = &c;
    }
    std::ostringstream out;
    out << "# " << task_ << " evaluation\n";
    for (const auto& n : notes_) out << "# " << n << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-10s %-8s", "language", "tier");
    out << buf;
    for (const auto& m : metrics) {
      std::snprintf(buf, sizeof buf, " %12s", m.c_str());
      out << buf;
    }
    out << " " << "count" << '\n';
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof buf, "%-10s %-8s", row.first.c_str(), row.second.c_str());
      out << buf;
      std::size_t count = 0;
      for (const auto& m : metrics) {
        auto it = grid[row].find(m);
        if (it == grid[row].end()) {
          std::snprintf(buf, sizeof buf, " %12s", "-");
        } else {
          std::snprintf(buf, sizeof buf, " %12.3f", it->second->value);
          count = std::max(count, it->second->count);
        }
        out << buf;
      }
      out << " " << count << '\n';
    }
    return out.str();
  }

 private:
  std::string task_;
  std::vector<ReportCell> cells_;
  std::vector<std::string> notes_;
};

}  // namespace kgtrick
