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


// Serial reference kernels against their OpenMP counterparts at serving
// scale: 120,000 candidates, width 128, top-80.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <numeric>
#include <random>
#include <vector>

#include "zsfc/kernels.h"
#include "zsfc/rng.h"

namespace {

using zsfc::CandidateFilter;
using zsfc::CategoryId;
using zsfc::ItemId;

constexpr std::size_t kItems = 120000;
constexpr std::size_t kDim = 128;
constexpr std::size_t kTop = 80;
constexpr std::size_t kCategories = 40;

struct Workload {
  std::vector<float> table;
  std::vector<ItemId> candidates;
  std::vector<float> user;
  std::vector<CategoryId> category;
  std::vector<char> mask;

  Workload() : table(kItems * kDim), candidates(kItems), user(kDim), category(kItems), mask(kCategories, 1) {
    zsfc::Rng rng = zsfc::make_rng(1, "bench");
    std::normal_distribution<float> g(0.0f, 0.1f);
    for (auto& v : table) v = g(rng);
    for (auto& v : user) v = g(rng);
    std::iota(candidates.begin(), candidates.end(), ItemId{0});
    std::uniform_int_distribution<CategoryId> cat(0, kCategories - 1);
    for (auto& c : category) c = cat(rng);
    mask[3] = 0;  // the base item's own category
  }

  zsfc::EmbeddingView view() const { return {table.data(), kItems, kDim}; }
  CandidateFilter filter() const { return {category, mask}; }
};

const Workload& workload() {
  static const Workload w;
  return w;
}

class Threads {
 public:
  explicit Threads(int n) : saved_(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved_); }

 private:
  int saved_;
};

void BM_ScoreSerial(benchmark::State& state) {
  const auto& w = workload();
  std::vector<float> out(kItems);
  for (auto _ : state) {
    zsfc::kernels::score_serial(w.view(), w.candidates, w.user, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kItems));
}

void BM_ScoreParallel(benchmark::State& state) {
  const auto& w = workload();
  const Threads threads(static_cast<int>(state.range(0)));
  std::vector<float> out(kItems);
  for (auto _ : state) {
    zsfc::kernels::score_parallel(w.view(), w.candidates, w.user, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kItems));
}

void BM_RankSerial(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) {
    auto top = zsfc::kernels::rank_serial(w.view(), w.candidates, w.user, w.filter(), kTop);
    benchmark::DoNotOptimize(top.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kItems));
}

void BM_RankParallel(benchmark::State& state) {
  const auto& w = workload();
  const Threads threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto top = zsfc::kernels::rank_parallel(w.view(), w.candidates, w.user, w.filter(), kTop);
    benchmark::DoNotOptimize(top.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kItems));
}

BENCHMARK(BM_ScoreSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RankSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
