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

#include "zsfc/sampler.h"

#include <omp.h>

#include <gtest/gtest.h>

#include "oracles/sampler_oracle.h"
#include "support.h"
#include "zsfc/dataset_io.h"

namespace zsfc {
namespace {

class FixtureSampler : public ::testing::Test {
 protected:
  void SetUp() override {
    catalog_ = load_catalog(testing::fixture_catalog_paths());
    histories_ = load_interactions(testing::fixture_dir() / "interactions.tsv", catalog_);
    matrix_ = build_cooccurrence(histories_, catalog_.size());
  }
  ItemId id(const char* key) const { return catalog_.require(key); }

  std::vector<TrainingExample> for_user(std::uint64_t user, const SamplerConfig& config = {}) const {
    for (const auto& h : histories_) {
      if (h.user == user) return extract_examples(h, matrix_, catalog_, config);
    }
    return {};
  }

  std::vector<TrainingExample> with_base(std::uint64_t user, const char* base, const SamplerConfig& c = {}) const {
    std::vector<TrainingExample> out;
    for (auto& e : for_user(user, c)) {
      if (e.base == id(base)) out.push_back(e);
    }
    return out;
  }

  Catalog catalog_;
  std::vector<UserHistory> histories_;
  CooccurrenceMatrix matrix_;
};

std::vector<ItemId> targets(const std::vector<TrainingExample>& ex) {
  std::vector<ItemId> t;
  for (const auto& e : ex) t.push_back(e.target);
  std::sort(t.begin(), t.end());
  return t;
}

TEST_F(FixtureSampler, MatchesLiteralEnumeration) {
  for (std::size_t top_n : {200u, 5u, 3u, 1u}) {
    SamplerConfig c;
    c.top_n = top_n;
    EXPECT_TRUE(oracle::same_examples(extract_all(histories_, matrix_, catalog_, c),
                                      oracle::enumerate_examples(histories_, catalog_, c)))
        << "top_n=" << top_n;
  }
}

TEST_F(FixtureSampler, MatchesFrozenExpectedDatasets) {
  SamplerConfig c;
  EXPECT_EQ(extract_all(histories_, matrix_, catalog_, c),
            read_dataset(testing::fixture_dir() / "expected_dataset.jsonl", catalog_));
  c.top_n = 3;
  const auto top3 = extract_all(histories_, matrix_, catalog_, c);
  EXPECT_EQ(top3, read_dataset(testing::fixture_dir() / "expected_dataset_top3.jsonl", catalog_));
  EXPECT_LT(top3.size(), extract_all(histories_, matrix_, catalog_, {}).size());
}

TEST_F(FixtureSampler, LookaheadAndHorizonEdges) {
  // t1 at T0: j1 clicked exactly one hour later and bought within the day;
  // n1 one second past the lookahead; l1 bought exactly 24h later; g1 one
  // second past; t2 shares the category; b1 is a negative pair.
  EXPECT_EQ(targets(with_base(1, "t1")), (std::vector<ItemId>{id("s1"), id("j1"), id("l1")}));
}

TEST_F(FixtureSampler, SameSecondEventsAreNeitherContextNorCandidates) {
  for (const auto& e : with_base(1, "t1")) EXPECT_TRUE(e.clicks.empty());
  for (const auto& e : with_base(1, "b1")) EXPECT_EQ(e.clicks, (std::vector<ItemId>{id("t1"), id("k1")}));
}

TEST_F(FixtureSampler, ContextWindowsAndCaps) {
  const auto ex = with_base(2, "s2");
  ASSERT_FALSE(ex.empty());
  EXPECT_EQ(ex[0].clicks.size(), 15u);
  EXPECT_EQ(ex[0].clicks.back(), id("b2"));
  EXPECT_EQ(ex[0].orders.size(), 5u);
  EXPECT_EQ(ex[0].orders.front(), id("k2"));

  SamplerConfig wide;
  wide.max_clicks = 100;
  wide.max_orders = 100;
  const auto all = with_base(2, "s2", wide);
  // 16 recent clicks plus the one exactly nine days back; the ten-day-old
  // click falls outside.
  EXPECT_EQ(all[0].clicks.size(), 17u);
  EXPECT_EQ(all[0].clicks.front(), id("b2"));
  // The order exactly 90 days back is in, the one at 91 days is out.
  EXPECT_EQ(all[0].orders.size(), 7u);
  EXPECT_EQ(all[0].orders.front(), id("l2"));
}

TEST_F(FixtureSampler, OneExamplePerDistinctTarget) {
  const auto ex = with_base(3, "j2");
  EXPECT_EQ(targets(ex), (std::vector<ItemId>{id("n2"), id("g2")}));
}

TEST_F(FixtureSampler, OrderedWithinDayNeedsSameUtcDay) {
  for (const auto& e : with_base(3, "s1")) {
    if (e.target == id("k2")) EXPECT_FALSE(e.ordered_within_day);
    if (e.target == id("l2")) EXPECT_TRUE(e.ordered_within_day);
  }
}

TEST_F(FixtureSampler, OrderOnlyCandidatesCount) {
  const auto t = targets(with_base(1, "t1"));
  EXPECT_TRUE(std::binary_search(t.begin(), t.end(), id("s1")));
}

TEST_F(FixtureSampler, ExtractAllIsSortedAndThreadIndependent) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = extract_all(histories_, matrix_, catalog_, {});
  omp_set_num_threads(3);
  const auto three = extract_all(histories_, matrix_, catalog_, {});
  omp_set_num_threads(saved);
  EXPECT_EQ(one, three);
  EXPECT_TRUE(std::is_sorted(one.begin(), one.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user, a.base_time, a.target) < std::tie(b.user, b.base_time, b.target);
  }));
}

TEST_F(FixtureSampler, SplitTakesLastUtcDay) {
  const auto all = extract_all(histories_, matrix_, catalog_, {});
  const Timestamp end = corpus_end(histories_);
  const auto split = split_by_time(all, end);
  EXPECT_EQ(split.train.size() + split.test.size(), all.size());
  ASSERT_FALSE(split.test.empty());
  ASSERT_FALSE(split.train.empty());
  for (const auto& e : split.test) EXPECT_EQ(utc_day(e.base_time), utc_day(end));
  for (const auto& e : split.train) EXPECT_LT(utc_day(e.base_time), utc_day(end));
}

TEST_F(FixtureSampler, ContextAtMatchesExtractedContext) {
  for (const auto& h : histories_) {
    for (const auto& e : extract_examples(h, matrix_, catalog_, {})) {
      const auto ctx = context_at(h, e.base_time, {});
      EXPECT_EQ(ctx.clicks, e.clicks);
      EXPECT_EQ(ctx.orders, e.orders);
    }
  }
}

TEST(SamplerConfig, RejectsNonsense) {
  SamplerConfig c;
  c.lookahead = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.click_window = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(SamplerConfig{}.validate());
}

TEST(Sampler, SyntheticWorldMatchesOracle) {
  WorldConfig wc;
  wc.n_items = 80;
  wc.n_categories = 10;
  wc.n_users = 60;
  wc.seed = 21;
  const auto world = generate_world(wc);
  const auto hs = generate_histories(world, wc);
  const auto m = build_cooccurrence(hs, world.catalog.size());
  SamplerConfig c;
  c.top_n = 10;
  const auto got = extract_all(hs, m, world.catalog, c);
  EXPECT_FALSE(got.empty());
  EXPECT_TRUE(oracle::same_examples(got, oracle::enumerate_examples(hs, world.catalog, c)));
}

}  // namespace
}  // namespace zsfc
