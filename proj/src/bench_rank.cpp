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

#include "zsfc/bench_rank.h"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "zsfc/rng.h"

namespace zsfc {

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(q > 0.0 && q <= 100.0)) throw std::invalid_argument("percentile must be in (0, 100]");
  std::sort(samples.begin(), samples.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(samples.size())));
  return samples[std::max<std::size_t>(rank, 1) - 1];
}

namespace {

class ThreadScope {
 public:
  explicit ThreadScope(int n) : saved_(omp_get_max_threads()) {
    if (n > 0) omp_set_num_threads(n);
  }
  ~ThreadScope() { omp_set_num_threads(saved_); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

 private:
  int saved_;
};

std::vector<TrainingExample> make_requests(std::size_t vocab, const BenchConfig& config) {
  Rng rng = make_rng(config.seed, "bench/requests");
  std::uniform_int_distribution<ItemId> pick(0, static_cast<ItemId>(vocab - 1));
  std::vector<TrainingExample> out(config.reps);
  for (auto& ex : out) {
    ex.clicks.resize(config.clicks_per_request);
    ex.orders.resize(config.orders_per_request);
    for (auto& c : ex.clicks) c = pick(rng);
    for (auto& o : ex.orders) o = pick(rng);
    ex.base = pick(rng);
  }
  return out;
}

}  // namespace

BenchResult bench_rank(const ModelParams& params, const Catalog& catalog, const BenchConfig& config) {
  if (config.k == 0 || config.reps == 0) throw std::invalid_argument("k and reps must be positive");
  if (config.n_candidates == 0 || config.n_candidates > catalog.size() || catalog.size() != params.n_items()) {
    throw std::invalid_argument("n_candidates must be in [1, vocabulary size]");
  }
  ThreadScope threads(config.threads);

  BenchResult result;
  const ItemTable table = build_item_table(params, catalog);
  result.candidates.resize(config.n_candidates);
  std::iota(result.candidates.begin(), result.candidates.end(), ItemId{0});
  std::vector<CategoryId> item_category(catalog.size());
  for (ItemId i = 0; i < catalog.size(); ++i) item_category[i] = catalog.category(i);
  result.requests = make_requests(catalog.size(), config);
  const auto view = table.candidates_view();

  std::vector<double> ms;
  ms.reserve(config.reps);
  result.results.reserve(config.reps);
  for (const auto& request : result.requests) {
    const auto start = std::chrono::steady_clock::now();
    const auto ctx = encode_context(request, params, table);
    const auto user = user_vector(ctx, params.variant);
    std::vector<char> mask;
    CandidateFilter filter;
    if (config.post_filter) {
      mask = catalog.complementary_category_mask(item_category[request.base]);
      filter = {item_category, mask};
    }
    auto top = config.execution == Execution::Serial
                   ? kernels::rank_serial(view, result.candidates, user, filter, config.k)
                   : kernels::rank_parallel(view, result.candidates, user, filter, config.k);
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    result.results.push_back(std::move(top));
  }

  result.stats.p50_ms = percentile(ms, 50.0);
  result.stats.p99_ms = percentile(ms, 99.0);
  result.stats.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  result.stats.max_ms = *std::max_element(ms.begin(), ms.end());
  return result;
}

nlohmann::json to_json(const LatencyStats& stats, const BenchConfig& config) {
  return {{"n_candidates", config.n_candidates},
          {"k", config.k},
          {"reps", config.reps},
          {"threads", config.threads},
          {"execution", config.execution == Execution::Serial ? "serial" : "parallel"},
          {"post_filter", config.post_filter},
          {"p50_ms", stats.p50_ms},
          {"p99_ms", stats.p99_ms},
          {"mean_ms", stats.mean_ms},
          {"max_ms", stats.max_ms}};
}

}  // namespace zsfc
