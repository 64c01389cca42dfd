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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "zsfc/catalog.h"
#include "zsfc/kernels.h"
#include "zsfc/model.h"
#include "zsfc/ranking.h"
#include "zsfc/sampler.h"

namespace zsfc {

struct BenchConfig {
  std::size_t n_candidates = 120000;
  std::size_t k = 80;
  std::size_t reps = 1000;
  std::size_t clicks_per_request = 15;
  std::size_t orders_per_request = 5;
  std::uint64_t seed = 0;
  /// OpenMP workers used while timing; 1 pins a single core.
  int threads = 1;
  Execution execution = Execution::Parallel;
  bool post_filter = true;
};

struct LatencyStats {
  double p50_ms = 0.0;
  double p99_ms = 0.0;
  double mean_ms = 0.0;
  double max_ms = 0.0;
};

struct BenchResult {
  LatencyStats stats;
  std::vector<TrainingExample> requests;
  std::vector<ItemId> candidates;
  std::vector<std::vector<ScoredItem>> results;
};

/// Nearest-rank percentile of `samples` (q in (0, 100]).
double percentile(std::vector<double> samples, double q);

/// Times context encoding + scoring + top-k for `reps` random requests
/// against the first `n_candidates` items. Item vectors are precomputed
/// once, outside the timed region. Throws std::invalid_argument when
/// n_candidates exceeds the vocabulary.
BenchResult bench_rank(const ModelParams& params, const Catalog& catalog, const BenchConfig& config);

nlohmann::json to_json(const LatencyStats& stats, const BenchConfig& config);

}  // namespace zsfc
