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

// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles/cf_oracle.h"
#include "oracles/gradient_check.h"
#include "oracles/sampler_oracle.h"
#include "support.h"
#include "zsfc/bench_rank.h"
#include "zsfc/cf_baseline.h"
#include "zsfc/checkpoint.h"
#include "zsfc/cooccurrence.h"
#include "zsfc/dataset_io.h"
#include "zsfc/eval.h"
#include "zsfc/ranking.h"
#include "zsfc/synth.h"
#include "zsfc/training.h"

namespace {

using namespace zsfc;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Analytic gradients against central finite differences.
Outcome gradient_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t kVocab = 64, kDim = 8, kExamples = 5, kNegatives = 20;
  // Gradients below this magnitude are compared in absolute terms: float
  // accumulation leaves about 1e-7 of absolute noise.
  constexpr double kFloatFloor = 1e-4;
  const Catalog catalog = testing::small_catalog(kVocab, 8, kDim, 11);
  Rng rng = make_rng(11, "acceptance/gradients");
  double worst32 = 0.0, worst64 = 0.0;
  std::size_t checked = 0;
  for (ModelVariant v : kAllVariants) {
    auto params = init_params(catalog, v, kDim, traits(v).image_init ? InitMode::Image : InitMode::Xavier, 5);
    // Move biases and the event table off zero so every path carries gradient.
    std::normal_distribution<float> noise(0.0f, 0.1f);
    params.for_each([&](const char*, Matrix<float>& m) {
      for (auto& x : m.flat()) x += noise(rng);
    });
    for (std::size_t e = 0; e < kExamples; ++e) {
      const auto ex = testing::random_example(kVocab, rng, 6, 3);
      const ItemId exclude[] = {ex.target, ex.base};
      const auto neg = sample_negatives(kVocab, kNegatives, exclude, rng);
      const auto c32 = oracle::check_gradients<float>(ex, neg, params, catalog, kFloatFloor);
      worst32 = std::max(worst32, c32.max_rel_error);
      worst64 = std::max(worst64, oracle::check_gradients<double>(ex, neg, params.cast<double>(), catalog).max_rel_error);
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  return {worst32 <= 1e-3 && worst64 <= 1e-6 && secs < 60.0,
          fmt("%zu examples over 5 variants; max rel error 32-bit %.2e (<= 1e-3), 64-bit %.2e (<= 1e-6); %.1f s",
              checked, worst32, worst64, secs)};
}

// 2. Sampled softmax with every non-target item as a negative equals the
// full cross-entropy.
Outcome softmax_equivalence() {
  constexpr std::size_t kVocab = 64, kDim = 8;
  const Catalog catalog = testing::small_catalog(kVocab, 8, kDim, 12);
  Rng rng = make_rng(12, "acceptance/softmax");
  double worst = 0.0;
  for (ModelVariant v : kAllVariants) {
    const auto params = init_params(catalog, v, kDim, InitMode::Xavier, 6).cast<double>();
    for (int e = 0; e < 10; ++e) {
      const auto ex = testing::random_example(kVocab, rng);
      std::vector<ItemId> negatives;
      for (ItemId i = 0; i < kVocab; ++i) {
        if (i != ex.target) negatives.push_back(i);
      }
      const double sampled = loss<double>(ex, negatives, params, catalog);
      const long double exact = oracle::exact_cross_entropy(ex, params, catalog);
      worst = std::max(worst, static_cast<double>(std::abs(sampled - exact)));
    }
  }
  return {worst <= 1e-6, fmt("50 examples over 5 variants; max |sampled - exact| = %.2e (<= 1e-6)", worst)};
}

// 3. Sampler against the literal enumeration on the scripted fixture.
Outcome sampler_oracle() {
  const Catalog catalog = load_catalog(testing::fixture_catalog_paths());
  const auto histories = load_interactions(testing::fixture_dir() / "interactions.tsv", catalog);
  const auto matrix = build_cooccurrence(histories, catalog.size());
  std::size_t events = 0;
  for (const auto& h : histories) events += h.events.size();
  bool all = true;
  std::string detail = fmt("%zu users, %zu events;", histories.size(), events);
  for (std::size_t top_n : {std::size_t{200}, std::size_t{3}}) {
    SamplerConfig config;
    config.top_n = top_n;
    const auto got = extract_all(histories, matrix, catalog, config);
    const auto want = oracle::enumerate_examples(histories, catalog, config);
    const bool same = oracle::same_examples(got, want);
    all = all && same && !got.empty();
    detail += fmt(" top_n=%zu: %zu vs %zu examples %s;", top_n, got.size(), want.size(), same ? "equal" : "DIFFER");
  }
  return {all, detail};
}

// 4. Post-filtered ranking never returns a non-complementary item.
Outcome complementary_guarantee() {
  WorldConfig wc;
  wc.negative_pair_fraction = 0.2;
  wc.seed = 14;
  const World world = generate_world(wc);
  const Catalog& catalog = world.catalog;
  const auto params = init_params(catalog, ModelVariant::Zsfc, 32, InitMode::Image, 14);
  const ItemTable table = build_item_table(params, catalog);
  Rng rng = make_rng(14, "acceptance/complementary");
  std::vector<ItemId> all(catalog.size());
  std::iota(all.begin(), all.end(), ItemId{0});
  std::size_t violations = 0, returned = 0;
  constexpr int kCalls = 10000;
  for (int call = 0; call < kCalls; ++call) {
    const auto ex = testing::random_example(catalog.size(), rng);
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, all.size())(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 100)(rng);
    RankOptions opts;
    opts.base = ex.base;
    opts.execution = call % 2 ? Execution::Serial : Execution::Parallel;
    const auto ctx = encode_context(ex, params, table);
    const auto top = rank_candidates(ctx, std::span(all).first(n), k, params, table, catalog, opts);
    returned += top.size();
    for (const auto& s : top) violations += !catalog.is_complementary(ex.base, s.item);
  }
  return {violations == 0 && returned > 0,
          fmt("%d calls, %zu items returned, %zu violations", kCalls, returned, violations)};
}

// 5. Directional learning on planted synthetic data.
Outcome directional_learning() {
  const auto t0 = std::chrono::steady_clock::now();
  int a_ok = 0, b_ok = 0, c_ok = 0;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    WorldConfig wc;
    wc.seed = seed;
    const World world = generate_world(wc);
    const Catalog& catalog = world.catalog;
    const auto histories = generate_histories(world, wc);
    const auto matrix = build_cooccurrence(histories, catalog.size());
    const auto examples = extract_all(histories, matrix, catalog, SamplerConfig{});
    const auto split = split_by_time(examples, corpus_end(histories));

    double candidates = 0.0;
    for (const auto& ex : split.test) {
      const auto mask = catalog.complementary_category_mask(catalog.category(ex.base));
      for (ItemId i = 0; i < catalog.size(); ++i) candidates += mask[catalog.category(i)] != 0;
    }
    const double chance = 5.0 / (candidates / static_cast<double>(split.test.size()));

    auto run = [&](ModelVariant v) {
      TrainConfig tc;
      tc.variant = v;
      tc.dim = 32;
      tc.epochs = 5;
      tc.learning_rate = 5e-4;
      tc.negatives = std::min<std::size_t>(tc.negatives, catalog.size() - 2);
      tc.seed = seed;
      const auto result = train(split.train, catalog, tc);
      const ModelRecommender rec(result.params, catalog);
      return evaluate([&](const TrainingExample& ex, std::size_t k) { return rec.recommend(ex, k); }, split.test, 5);
    };
    const auto zsfc = run(ModelVariant::Zsfc);
    const auto stamp = run(ModelVariant::Stamp);
    const auto orders = run(ModelVariant::StampPlusOrders);
    const CFModel cf(matrix);
    const auto cfc = evaluate(
        [&](const TrainingExample& ex, std::size_t k) { return cf_c_recommend(cf, ex.base, k, catalog); }, split.test,
        5);

    auto orv = [](const EvalReport& r) { return r.order_recall_at_k.value_or(0.0); };
    a_ok += zsfc.recall_at_k >= 5.0 * chance;
    b_ok += orv(orders) >= orv(stamp);
    c_ok += orv(zsfc) >= orv(cfc);
    detail += fmt(
        "\n    seed %llu: %zu train / %zu test; chance %.4f; zsfc R@5 %.4f OR@5 %.4f; stamp OR@5 %.4f; "
        "stamp+orders OR@5 %.4f; cf-c OR@5 %.4f",
        static_cast<unsigned long long>(seed), split.train.size(), split.test.size(), chance, zsfc.recall_at_k,
        orv(zsfc), orv(stamp), orv(orders), orv(cfc));
  }
  const double secs = seconds_since(t0);
  const bool pass = a_ok == 3 && b_ok >= 2 && c_ok >= 2 && secs < 600.0;
  return {pass, fmt("(a) %d/3 seeds >= 5x chance, (b) %d/3, (c) %d/3; %.0f s", a_ok, b_ok, c_ok, secs) + detail};
}

// 6. Ranking latency at serving scale.
Outcome latency_benchmark() {
  WorldConfig wc;
  wc.n_items = 120000;
  wc.feature_dim = 0;
  wc.seed = 16;
  const Catalog catalog = generate_world(wc).catalog;
  const auto params = init_params(catalog, ModelVariant::Zsfc, 128, InitMode::Xavier, 16);
  BenchConfig bc;
  bc.seed = 16;
  bc.threads = 1;
  const auto result = bench_rank(params, catalog, bc);

  const ItemTable table = build_item_table(params, catalog);
  std::size_t mismatches = 0, short_lists = 0;
  for (std::size_t r = 0; r < result.requests.size(); ++r) {
    RankOptions opts;
    opts.base = result.requests[r].base;
    opts.execution = Execution::Serial;
    const auto ctx = encode_context(result.requests[r], params, table);
    const auto want = rank_candidates(ctx, result.candidates, bc.k, params, table, catalog, opts);
    mismatches += want != result.results[r];
    short_lists += result.results[r].size() != bc.k;
  }
  return {result.stats.p99_ms <= 50.0 && mismatches == 0 && short_lists == 0,
          fmt("120000 candidates, d=128, top-80, 1000 requests, 1 thread: p50 %.2f ms, p99 %.2f ms (<= 50); "
              "%zu result mismatches, %zu lists not of length 80",
              result.stats.p50_ms, result.stats.p99_ms, mismatches, short_lists)};
}

// 7. Checkpoint round trip and resumed evaluation.
Outcome checkpoint_round_trip() {
  WorldConfig wc;
  wc.n_items = 200;
  wc.n_categories = 20;
  wc.n_users = 400;
  wc.feature_dim = 16;
  wc.seed = 17;
  const World world = generate_world(wc);
  const auto histories = generate_histories(world, wc);
  const auto matrix = build_cooccurrence(histories, world.catalog.size());
  const auto examples = extract_all(histories, matrix, world.catalog, SamplerConfig{});
  const auto split = split_by_time(examples, corpus_end(histories));
  TrainConfig tc;
  tc.dim = 16;
  tc.epochs = 2;
  tc.negatives = 100;
  tc.seed = 17;
  const auto trained = train(split.train, world.catalog, tc);

  const auto bytes = checkpoint_bytes(trained.params);
  const auto dir = testing::scratch_dir("acceptance_ckpt");
  save_checkpoint(trained.params, dir / "model.ckpt");
  const auto loaded = load_checkpoint(dir / "model.ckpt");
  const bool identical = checkpoint_bytes(loaded) == bytes && loaded == trained.params;

  auto report_for = [&](const ModelParams& p) {
    const ModelRecommender rec(p, world.catalog);
    return evaluate([&](const TrainingExample& ex, std::size_t k) { return rec.recommend(ex, k); }, split.test, 5);
  };
  const auto before = report_for(trained.params);
  const auto after = report_for(loaded);
  fs::remove_all(dir);
  return {identical && before == after,
          fmt("%zu-byte checkpoint %s; report R@5 %.4f vs %.4f %s", bytes.size(),
              identical ? "byte-identical after save/load/save" : "DIFFERS", before.recall_at_k, after.recall_at_k,
              before == after ? "(identical)" : "(DIFFERENT)")};
}

// 8. CF-c against the dense oracle on a 4-item matrix needing one expansion.
Outcome cf_oracle() {
  std::vector<std::pair<std::string, std::string>> rows{{"a", ""}, {"b", ""}, {"c", ""}, {"d", ""}};
  std::vector<CatalogEntry> entries{{"i0", 0, {}}, {"i1", 1, {}}, {"i2", 2, {}}, {"i3", 3, {}}};
  const Catalog catalog(entries, CategoryHierarchy::from_rows(rows), NegativePairList{});
  const std::vector<std::pair<std::uint64_t, std::uint32_t>> pairs{
      {(0ULL << 32) | 3, 1}, {(1ULL << 32) | 2, 1}, {(1ULL << 32) | 3, 1}, {(2ULL << 32) | 3, 2}};
  const CooccurrenceMatrix matrix(4, pairs);
  oracle::DenseCounts dense(4, std::vector<double>(4, 0.0));
  for (auto [key, c] : pairs) {
    const std::uint64_t a = key >> 32, b = key & 0xffffffffULL;
    dense[a][b] = dense[b][a] = c;
  }
  const CFModel cf(matrix);
  bool ok = true;
  std::string detail;
  for (ItemId base = 0; base < 4; ++base) {
    for (std::size_t k = 1; k <= 3; ++k) {
      ok = ok && cf_c_recommend(cf, base, k, catalog) == oracle::cf_c(dense, base, k, catalog);
    }
  }
  const auto got = cf_c_recommend(cf, 0, 3, catalog);
  const auto direct = cf.neighbors(0).size();
  detail = fmt("base i0, k=3 -> [%s] with %zu direct neighbours; all bases and k in 1..3 %s",
               [&] {
                 std::string s;
                 for (auto i : got) s += (s.empty() ? "" : ", ") + catalog.key(i);
                 return s;
               }()
                   .c_str(),
               direct, ok ? "match the oracle" : "DIFFER from the oracle");
  return {ok && got.size() == 3 && direct == 2, detail};
}

// 9. Full CLI pipeline, twice, compared file by file.
Outcome cli_determinism() {
  const auto root = testing::scratch_dir("acceptance_cli");
  auto pipeline = [&](const fs::path& dir) {
    fs::create_directories(dir);
    const std::string g = "--seed 9 --threads 1 ";
    const std::string data = "--data-dir \"" + (dir / "world").string() + "\" ";
    int rc = 0;
    rc |= testing::run_cli(g + "synth --out-dir \"" + (dir / "world").string() +
                               "\" --items 150 --categories 15 --users 300 --feature-dim 8",
                           dir, "synth");
    rc |= testing::run_cli(g + "sample " + data + "--out-dir \"" + (dir / "data").string() + "\"", dir, "sample");
    rc |= testing::run_cli(g + "train " + data + "--train \"" + (dir / "data/train.jsonl").string() + "\" --out \"" +
                               (dir / "model.ckpt").string() + "\" --log \"" + (dir / "train_log.jsonl").string() +
                               "\" --dim 8 --epochs 2 --negatives 64",
                           dir, "train");
    rc |= testing::run_cli(g + "eval " + data + "--checkpoint \"" + (dir / "model.ckpt").string() + "\" --test \"" +
                               (dir / "data/test.jsonl").string() + "\" --report \"" +
                               (dir / "eval_report.json").string() + "\"",
                           dir, "eval");
    rc |= testing::run_cli(g + "eval " + data + "--baseline cf --test \"" + (dir / "data/test.jsonl").string() +
                               "\" --report \"" + (dir / "cf_report.json").string() + "\"",
                           dir, "eval_cf");
    return rc;
  };
  const int rc1 = pipeline(root / "run1");
  const int rc2 = pipeline(root / "run2");
  // One JSON object per line.
  auto strip_timing = [](const std::string& text) {
    std::istringstream in(text);
    auto j = nlohmann::json::array();
    for (std::string line; std::getline(in, line);) {
      auto e = nlohmann::json::parse(line);
      e.erase("wall_ms");
      j.push_back(e);
    }
    return j.dump();
  };
  const char* files[] = {"world/catalog.tsv", "world/hierarchy.tsv", "world/negative_pairs.tsv",
                         "world/interactions.tsv", "world/complements.tsv", "data/dataset.jsonl",
                         "data/train.jsonl", "data/test.jsonl", "model.ckpt", "eval_report.json",
                         "cf_report.json", "eval.out", "eval_cf.out"};
  std::size_t differing = 0, bytes = 0;
  std::string which;
  for (const char* f : files) {
    const auto a = testing::read_file(root / "run1" / f);
    const auto b = testing::read_file(root / "run2" / f);
    bytes += a.size();
    if (a != b || a.empty()) {
      ++differing;
      which += std::string(" ") + f;
    }
  }
  const auto log1 = strip_timing(testing::read_file(root / "run1/train_log.jsonl"));
  const bool logs_equal = log1 != "[]" && log1 == strip_timing(testing::read_file(root / "run2/train_log.jsonl"));
  fs::remove_all(root);
  return {rc1 == 0 && rc2 == 0 && differing == 0 && logs_equal,
          fmt("exit codes %d/%d; %zu files (%zu bytes) compared, %zu differ%s; training log %s", rc1, rc2,
              std::size(files), bytes, differing, which.c_str(), logs_equal ? "identical without wall_ms" : "DIFFERS")};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<bool> selected(10, argc == 1);
  for (int i = 1; i < argc; ++i) selected.at(static_cast<std::size_t>(std::stoi(argv[i]))) = true;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"gradient oracle", gradient_oracle},
      {"softmax equivalence", softmax_equivalence},
      {"sampler oracle", sampler_oracle},
      {"complementary guarantee", complementary_guarantee},
      {"directional learning", directional_learning},
      {"latency benchmark", latency_benchmark},
      {"checkpoint round trip", checkpoint_round_trip},
      {"cf-c oracle", cf_oracle},
      {"cli determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i + 1]) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
