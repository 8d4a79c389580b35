// Copyright 2026 The MAQV Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.h"
#include "fixtures.h"
#include "maqv/corpus.h"

namespace maqv::cli {
namespace {

using testing::FixturePath;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Fx(const std::string& rel) { return FixturePath(rel).string(); }

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(RunCli({}).code, kExitUsage);
  EXPECT_EQ(RunCli({"bogus"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"irr"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"irr", "--grid", Fx("irr/rating_grid.json"), "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"analyze", "nonsense", "--corpus", Fx("corpus")}).code, kExitUsage);
}

TEST(CliTest, MissingInputExitsOne) {
  Result r = RunCli({"irr", "--grid", "/nonexistent/grid.json"});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliTest, ValidateIdenticalFilesGivesPerfectF1) {
  Result r = RunCli({"validate", "--gold", Fx("gold.json"), "--pred", Fx("pred.json"),
                     "--corpus", Fx("corpus"), "--resamples", "100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json doc = Json::parse(r.out);
  bool seen = false;
  for (const Json& row : doc["rows"]) {
    if (row["metric"] == "f1") {
      EXPECT_EQ(row["value"].get<double>(), 1.0);
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST(CliTest, ValidateNoisyPredictions) {
  Result r = RunCli({"validate", "--gold", Fx("gold.json"), "--pred", Fx("pred_noisy.json"),
                     "--resamples", "0", "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("f1,0.993421"), std::string::npos) << r.out;
}

TEST(CliTest, IrrPrintsPooledKappa) {
  Result r = RunCli({"irr", "--grid", Fx("irr/rating_grid.json"), "--resamples", "200"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json doc = Json::parse(r.out);
  EXPECT_NEAR(doc["pooled"]["kappa"].get<double>(), 0.9131, 0.001);
  Result csv = RunCli({"--format", "csv", "irr", "--grid", Fx("irr/rating_grid.json"), "--resamples", "10"});
  ASSERT_EQ(csv.code, kExitOk);
  EXPECT_EQ(csv.out.rfind("dimension,kappa", 0), 0u);
}

TEST(CliTest, MotifsMatchHandEnumeration) {
  Result r = RunCli({"analyze", "motifs", "--corpus", Fx("motifs/two_missions.json"),
                     "--level", "category", "--k", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json doc = Json::parse(r.out);
  ASSERT_EQ(doc.size(), 3u);
  // alpha: T C T C T; beta: S T C S T C.
  EXPECT_EQ(doc[0]["motif"], Json({"Stealth", "Traversal", "Combat"}));
  EXPECT_EQ(doc[0]["support"], 2);
  EXPECT_EQ(doc[1]["motif"], Json({"Traversal", "Combat", "Traversal"}));
  EXPECT_EQ(doc[1]["support"], 2);
  EXPECT_EQ(doc[2]["motif"], Json({"Combat", "Stealth", "Traversal"}));
  EXPECT_EQ(doc[2]["support"], 1);
}

TEST(CliTest, SampleIsDeterministic) {
  Result a = RunCli({"sample", "--corpus", Fx("corpus"), "--n", "12", "--seed", "42"});
  Result b = RunCli({"sample", "--corpus", Fx("corpus"), "--n", "12", "--seed", "42"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  Json doc = Json::parse(a.out);
  EXPECT_EQ(doc["mission_ids"].size(), 12u);
  EXPECT_EQ(RunCli({"sample", "--corpus", Fx("corpus"), "--n", "10000"}).code, kExitRuntime);
}

TEST(CliTest, ExtractWithStubBackend) {
  auto dir = std::filesystem::temp_directory_path() / "maqv_cli_extract";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string out = (dir / "fallout4.json").string();
  const std::string log = (dir / "log.jsonl").string();
  Result r = RunCli({"extract", "--corpus", Fx("corpus"), "--game", "fallout4", "--backend",
                     "stub", "--out", out, "--log", log});
  EXPECT_NE(r.code, kExitUsage) << r.err;
  ASSERT_TRUE(std::filesystem::exists(out));
  Corpus extracted = LoadCorpus(ReadJsonFile(out));
  ASSERT_EQ(extracted.games().size(), 1u);
  std::ifstream in(log);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    Json rec = Json::parse(line);
    EXPECT_TRUE(rec.contains("mission_id"));
    EXPECT_TRUE(rec.contains("attempt"));
    ++lines;
  }
  EXPECT_GT(lines, 0);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, AnalyzeAllWritesChartDocuments) {
  auto dir = std::filesystem::temp_directory_path() / "maqv_cli_analyze";
  std::filesystem::remove_all(dir);
  Result r = RunCli({"analyze", "all", "--corpus", Fx("corpus"), "--out-dir", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    (void)e;
    ++files;
  }
  EXPECT_GT(files, 3);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, ConfigRejectsUnknownKeys) {
  auto path = std::filesystem::temp_directory_path() / "maqv_bad_config.json";
  std::ofstream(path) << R"({"corpus": "x", "surprise": 1})";
  EXPECT_EQ(RunCli({"--config", path.string(), "analyze", "topk"}).code, kExitUsage);
  std::filesystem::remove(path);
}

TEST(CliTest, ConfigSuppliesCorpus) {
  auto path = std::filesystem::temp_directory_path() / "maqv_config.json";
  Json cfg = {{"corpus", Fx("corpus")}};
  std::ofstream(path) << cfg.dump();
  Result r = RunCli({"--config", path.string(), "analyze", "topk", "--k", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace maqv::cli
