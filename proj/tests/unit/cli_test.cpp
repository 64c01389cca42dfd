// Copyright 2026 The zsfc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <json.hpp>

#include "support.h"
#include "zsfc/checkpoint.h"
#include "zsfc/model.h"

namespace zsfc {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::run_cli;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { dir = testing::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name()); }
  void TearDown() override { fs::remove_all(dir); }

  std::string data() const { return "--data-dir \"" + testing::fixture_dir().string() + "\" "; }
  std::string q(const fs::path& p) const { return "\"" + p.string() + "\" "; }

  fs::path dir;
};

TEST_F(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(run_cli("", dir), 1); }

TEST_F(Cli, MissingRequiredFlagIsUsageError) {
  EXPECT_EQ(run_cli("sample " + data(), dir), 1);
  EXPECT_EQ(run_cli("train " + data() + "--out " + q(dir / "m.ckpt"), dir), 1);
  EXPECT_EQ(run_cli("frobnicate", dir), 1);
}

TEST_F(Cli, BadDataIsRuntimeError) {
  testing::write_file(dir / "catalog.tsv", "item\tnot-a-category\n");
  testing::write_file(dir / "hierarchy.tsv", "tops\t\n");
  testing::write_file(dir / "negative_pairs.tsv", "");
  testing::write_file(dir / "interactions.tsv", "");
  EXPECT_EQ(run_cli("sample --data-dir " + q(dir) + "--out-dir " + q(dir / "out"), dir), 2);
  EXPECT_NE(read_file(dir / "cli.err").find("error"), std::string::npos);
  EXPECT_EQ(run_cli("sample --data-dir " + q(dir / "missing") + "--out-dir " + q(dir / "out"), dir), 2);
}

TEST_F(Cli, SampleMatchesScriptedEnumeration) {
  ASSERT_EQ(run_cli("sample " + data() + "--out-dir " + q(dir / "a"), dir), 0);
  EXPECT_EQ(read_file(dir / "a" / "dataset.jsonl"), read_file(testing::fixture_dir() / "expected_dataset.jsonl"));
  ASSERT_EQ(run_cli("sample " + data() + "--top-n 3 --out-dir " + q(dir / "b"), dir), 0);
  EXPECT_EQ(read_file(dir / "b" / "dataset.jsonl"), read_file(testing::fixture_dir() / "expected_dataset_top3.jsonl"));
  const auto total = read_file(dir / "a" / "dataset.jsonl");
  EXPECT_EQ(read_file(dir / "a" / "train.jsonl").size() + read_file(dir / "a" / "test.jsonl").size(), total.size());
}

TEST_F(Cli, ZeroEpochTrainingWritesInitialisation) {
  ASSERT_EQ(run_cli("sample " + data() + "--out-dir " + q(dir), dir), 0);
  ASSERT_EQ(run_cli("--seed 5 train " + data() + "--train " + q(dir / "train.jsonl") + "--out " + q(dir / "m.ckpt") +
                        "--variant stamp+category --dim 4 --epochs 0 --negatives 8",
                    dir),
            0);
  const auto catalog = load_catalog(testing::fixture_catalog_paths());
  EXPECT_EQ(load_checkpoint(dir / "m.ckpt"), init_params(catalog, ModelVariant::StampPlusCategory, 4, InitMode::Xavier, 5));
}

TEST_F(Cli, TrainEvalRecommendRoundTrip) {
  ASSERT_EQ(run_cli("sample " + data() + "--out-dir " + q(dir), dir), 0);
  ASSERT_EQ(run_cli("--threads 1 train " + data() + "--train " + q(dir / "dataset.jsonl") + "--out " +
                        q(dir / "m.ckpt") + "--log " + q(dir / "log.jsonl") + "--dim 4 --epochs 2 --negatives 8",
                    dir),
            0);
  std::istringstream log(read_file(dir / "log.jsonl"));
  std::vector<nlohmann::json> epochs;
  for (std::string line; std::getline(log, line);) epochs.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(epochs.size(), 2u);
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    EXPECT_EQ(epochs[i]["epoch"], i + 1);
    EXPECT_TRUE(epochs[i].contains("mean_loss"));
    EXPECT_TRUE(epochs[i].contains("wall_ms"));
  }

  ASSERT_EQ(run_cli("--json eval " + data() + "--checkpoint " + q(dir / "m.ckpt") + "--test " +
                        q(dir / "test.jsonl") + "-k 5 --report " + q(dir / "report.json"),
                    dir, "eval"),
            0);
  const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
  EXPECT_EQ(report, nlohmann::json::parse(read_file(dir / "eval.out")));
  EXPECT_EQ(report["k"], 5);
  EXPECT_EQ(report["model"], "zsfc");

  ASSERT_EQ(run_cli("--json eval " + data() + "--baseline cf --test " + q(dir / "test.jsonl"), dir, "cf"), 0);
  EXPECT_EQ(nlohmann::json::parse(read_file(dir / "cf.out"))["model"], "cf-c");
  EXPECT_EQ(run_cli("eval " + data() + "--test " + q(dir / "test.jsonl"), dir), 1);

  ASSERT_EQ(run_cli("--json recommend " + data() + "--checkpoint " + q(dir / "m.ckpt") + "--base t1 -k 3", dir,
                    "rec"),
            0);
  const auto rec = nlohmann::json::parse(read_file(dir / "rec.out"));
  const auto catalog = load_catalog(testing::fixture_catalog_paths());
  EXPECT_LE(rec.size(), 3u);
  for (const auto& r : rec) {
    EXPECT_TRUE(catalog.is_complementary(catalog.require("t1"), catalog.require(r["item"].get<std::string>())));
  }
  EXPECT_EQ(run_cli("recommend " + data() + "--checkpoint " + q(dir / "m.ckpt") + "--base nope", dir), 2);
}

TEST_F(Cli, SynthAndBench) {
  ASSERT_EQ(run_cli("--seed 3 synth --out-dir " + q(dir / "w") + "--items 80 --categories 8 --users 30", dir), 0);
  for (const char* f : {"catalog.tsv", "hierarchy.tsv", "negative_pairs.tsv", "complements.tsv", "interactions.tsv"}) {
    EXPECT_TRUE(fs::exists(dir / "w" / f)) << f;
  }
  ASSERT_EQ(run_cli("--json bench --candidates 2000 -k 10 --reps 5 --dim 8 --report " + q(dir / "bench.json"), dir,
                    "bench"),
            0);
  const auto j = nlohmann::json::parse(read_file(dir / "bench.json"));
  EXPECT_LE(j["p50_ms"].get<double>(), j["p99_ms"].get<double>());
  EXPECT_EQ(j["n_candidates"], 2000);
}

}  // namespace
}  // namespace zsfc
