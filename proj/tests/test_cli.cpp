// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "kgtrick/cli.hpp"
#include "support/fixtures.hpp"

namespace kgtrick {
namespace {

using testing::read_file;
using testing::TempDir;

const std::filesystem::path kSamples = KGTRICK_SAMPLES_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "kgtrick");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(read_file(p)); }

// Sample config with every output redirected into a scratch directory.
class SampleWorkspace : public ::testing::Test {
 protected:
  void SetUp() override {
    snapshot_ = (dir_ / "world.snapshot.jsonl").string();
    const auto r = run({"ingest", "-c", config(), "--snapshot", snapshot_, "--output-dir", out()});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  std::string config() const { return (kSamples / "config.json").string(); }
  std::string out() const { return (dir_ / "out").string(); }

  std::vector<std::string> with_common(std::vector<std::string> args) const {
    args.insert(args.end(), {"-c", config(), "--snapshot", snapshot_, "--output-dir", out()});
    return args;
  }

  TempDir dir_;
  std::string snapshot_;
};

TEST(CliIngest, ManifestCounts) {
  TempDir dir;
  const auto trip = dir.write("t.tsv", "Q1\tP1\tQ2\nQ2\tP1\tQ3\nQ4\tP2\tQ5\n");
  const auto lex = dir.write("l.jsonl",
                             R"({"qid":"Q1","lang":"en","name":"one"})"
                             "\n"
                             R"({"qid":"Q2","lang":"en","name":"two"})"
                             "\n"
                             R"({"qid":"Q3","lang":"en","name":"three"})"
                             "\n"
                             R"({"qid":"Q4","lang":"es","name":"cuatro"})"
                             "\n");
  const auto snap = dir / "s.jsonl";
  const auto r = run({"ingest", "--triplets", trip.string(), "--lexical", lex.string(), "--snapshot", snap.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = read_json(snap.string() + ".manifest.json");
  EXPECT_EQ(manifest["triplets"], 3);
  EXPECT_EQ(manifest["entities"], 5);
  EXPECT_EQ(manifest["lexicalizations"], 4);
  const auto first = read_file(snap);
  ASSERT_EQ(run({"ingest", "--triplets", trip.string(), "--lexical", lex.string(), "--snapshot", snap.string()}).code, 0);
  EXPECT_EQ(read_file(snap), first);
}

TEST(CliIngest, MissingFileIsBadInput) {
  TempDir dir;
  const auto r = run({"ingest", "--triplets", (dir / "nope.tsv").string(), "--snapshot", (dir / "s").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("does not exist"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"ingest", "--bogus"}).code, 2);
  EXPECT_EQ(run({"eval", "kgx"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(SampleWorkspace, BuildDatasetCountsAndDeterminism) {
  const auto train = dir_ / "train.jsonl";
  auto args = with_common({"build-dataset", "-o", train.string()});
  auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = read_json(train.string() + ".manifest.json");
  const std::size_t kge = manifest["records"]["kge"], kgc = manifest["records"]["kgc"];
  const std::size_t total = manifest["records"]["total"];
  EXPECT_GT(kge, 0u);
  EXPECT_GT(kgc, 0u);
  EXPECT_EQ(total, kge + static_cast<std::size_t>(std::llround(0.5 * static_cast<double>(kgc))));
  EXPECT_GT(manifest["contamination_dropped"].get<std::size_t>(), 0u);
  EXPECT_EQ(manifest["seed"], 13);

  const auto text = read_file(train);
  std::istringstream lines(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(parse_input(j["input"].get<std::string>())) << line;
    // Benchmark entities are held out, so their names never head a record.
    for (const auto* held : {"[en] Joe Biden", "[en] Spain", "[en] Ulm", "[en] chemist"}) {
      EXPECT_FALSE(j["input"].get<std::string>().starts_with(held)) << line;
    }
    ++n;
  }
  EXPECT_EQ(n, total);
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(read_file(train), text);
}

TEST_F(SampleWorkspace, BuildDatasetRejectsBadFraction) {
  const auto r = run(with_common({"build-dataset", "--kgc-fraction", "1.5"}));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("kgc_fraction"), std::string::npos);
}

TEST_F(SampleWorkspace, EvalKgcWithOracle) {
  const auto r = run(with_common({"eval", "kgc", "--backend", "oracle"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mrr"), std::string::npos);
  std::istringstream table(r.out);
  std::string line;
  bool found = false;
  while (std::getline(table, line)) {
    if (line.starts_with("all        all")) {
      found = true;
      EXPECT_NE(line.find("1.000"), std::string::npos) << line;
    }
  }
  EXPECT_TRUE(found) << r.out;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "out" / "kgc_report.jsonl"));
  EXPECT_EQ(read_file(dir_ / "out" / "kgc_table.txt"), r.out);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "out" / "kgc.checkpoint.jsonl"));
}

TEST_F(SampleWorkspace, EvalKgeWithOracle) {
  const auto r = run(with_common({"eval", "kge"}));
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream report(dir_ / "out" / "kge_report.jsonl");
  std::string line;
  bool seen = false;
  while (std::getline(report, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j["language"] == "all" && j["tier"] == "all" && j["metric"] == "coverage_f1") {
      EXPECT_EQ(j["value"], 1.0);
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST_F(SampleWorkspace, EvalKgeFromStaticPredictions) {
  const auto preds = dir_.write("preds.jsonl",
                                R"({"input":"[en] Spain: country in southwestern Europe | names | ?","target_lang":"es","candidates":[{"text":"España","score":-1}]})"
                                "\n");
  const auto r = run(with_common({"eval", "kge", "--backend", "static:" + preds.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("coverage_f1"), std::string::npos);
  const auto missing = run(with_common({"eval", "kge", "--backend", "static:" + (dir_ / "none.jsonl").string()}));
  EXPECT_EQ(missing.code, 2);
}

TEST_F(SampleWorkspace, EvalTransportFailureKeepsCheckpoint) {
  const auto r = run(with_common({"eval", "kgc", "--backend", "remote:http://127.0.0.1:1"}));
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "out" / "kgc.checkpoint.jsonl"));
}

TEST_F(SampleWorkspace, Link) {
  auto r = run(with_common({"link", "--lang", "en", "--text", "Paris | prince of Troy"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "Q167646\t1\n");
  r = run(with_common({"link", "--lang", "en", "--text", "Atlantis"}));
  EXPECT_EQ(r.out, "none\n");
  EXPECT_EQ(run(with_common({"link", "--lang", "en", "--text", " "})).code, 2);
}

TEST_F(SampleWorkspace, Ensemble) {
  const auto input = dir_.write("linked.jsonl",
                                R"({"query":"q1","lang":"en","ranked":["Q1","Q2"]})"
                                "\n"
                                R"({"query":"q1","lang":"es","ranked":["Q2","Q1"]})"
                                "\n"
                                R"({"query":"q2","lang":"de","ranked":["Q7"]})"
                                "\n");
  const auto r = run(with_common({"ensemble", "-i", input.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            R"({"query":"q1","ranked":[{"qid":"Q1","votes":2,"best_rank":1,"rr_sum":1.5},{"qid":"Q2","votes":2,"best_rank":1,"rr_sum":1.5}]})"
            "\n"
            R"({"query":"q2","ranked":[{"qid":"Q7","votes":1,"best_rank":1,"rr_sum":1.0}]})"
            "\n");
  const auto dup = dir_.write("dup.jsonl", R"({"query":"q","lang":"en","ranked":["Q1","Q1"]})"
                                           "\n");
  EXPECT_EQ(run(with_common({"ensemble", "-i", dup.string()})).code, 2);
}

TEST(CliBinary, ExitCodes) {
  const std::string bin = KGTRICK_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(bin + " --help"), 0);
  EXPECT_EQ(status(bin + " eval nonsense"), 2);
  EXPECT_EQ(status(bin + " ingest --triplets /nonexistent --snapshot /tmp/x"), 2);
}

}  // namespace
}  // namespace kgtrick
