// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#include <sstream>

#include <gtest/gtest.h>

#include "kgtrick/snapshot.hpp"
#include "support/fixtures.hpp"

namespace kgtrick {
namespace {

using testing::L;

std::string dump(const KnowledgeGraph& g) {
  std::ostringstream out;
  write_snapshot(g, out);
  return out.str();
}

KnowledgeGraph mixed_graph() {
  GraphBuilder b;
  testing::add_biden(b);
  b.add_triplet("Q937", "P26", "Q68761");
  b.set_lexicalization("Q937", L("de"), {"Albert Einstein", {"Einstein"}, "Physiker"});
  b.set_relation_label("P26", L("en"), "spouse");
  b.set_tier("Q6279", Tier::Head);
  b.declare_relation("P999");
  return std::move(b).freeze();
}

TEST(Snapshot, RoundTripPreservesEverything) {
  const auto g = mixed_graph();
  std::istringstream in(dump(g));
  const auto back = read_snapshot(in);
  EXPECT_EQ(back.entity_count(), g.entity_count());
  EXPECT_EQ(back.relation_count(), g.relation_count());
  EXPECT_EQ(back.triplet_count(), g.triplet_count());
  for (std::size_t i = 0; i < g.triplet_count(); ++i) EXPECT_EQ(back.triplet(i), g.triplet(i));
  for (const auto& e : g.entities()) {
    const Entity* other = back.find_entity(e.qid);
    ASSERT_TRUE(other);
    EXPECT_EQ(other->lex, e.lex);
    EXPECT_EQ(other->tier, e.tier);
  }
  for (const auto& r : g.relations()) {
    ASSERT_TRUE(back.find_relation(r.pid));
    EXPECT_EQ(back.find_relation(r.pid)->labels, r.labels);
  }
  EXPECT_EQ(back.lookup_name(L("zh"), "乔·罗宾内特·拜登"), std::vector<std::string>{"Q6279"});
  EXPECT_EQ(dump(back), dump(g));
}

TEST(Snapshot, Deterministic) { EXPECT_EQ(dump(mixed_graph()), dump(mixed_graph())); }

TEST(Snapshot, RejectsForeignAndTruncated) {
  std::istringstream empty("");
  EXPECT_THROW(read_snapshot(empty), ValidationError);
  std::istringstream foreign(R"({"format":"other","version":1})"
                             "\n");
  EXPECT_THROW(read_snapshot(foreign), ValidationError);
  auto text = dump(mixed_graph());
  std::istringstream truncated(text.substr(0, text.find('\n') + 1));
  EXPECT_THROW(read_snapshot(truncated), InputError);
}

TEST(Snapshot, RoundTripWithLanguageSubset) {
  const auto g = testing::tiny_world();
  std::istringstream in(dump(g));
  const auto back = read_snapshot(in);
  EXPECT_EQ(dump(back), dump(g));
  const auto* names = back.find_relation(kNamesPid);
  ASSERT_NE(names, nullptr);
  EXPECT_EQ(names->labels.size(), 3u);
  EXPECT_EQ(names->labels.at(L("de")), "namen");
}

TEST(Snapshot, MissingFile) {
  EXPECT_THROW(read_snapshot(std::filesystem::path("/nonexistent/snap.jsonl")), IoError);
}

}  // namespace
}  // namespace kgtrick
