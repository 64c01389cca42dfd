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
#include <span>
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/kernels.h"
#include "zsfc/model.h"

namespace zsfc {

/// Per-item representations precomputed once per parameter set: the
/// event-independent fused vector and the candidate-typed vector that
/// ranking scores against.
struct ItemTable {
  Matrix<float> fused;
  Matrix<float> candidate;

  EmbeddingView candidates_view() const { return {candidate.data(), candidate.rows(), candidate.cols()}; }
};

ItemTable build_item_table(const ModelParams& params, const Catalog& catalog);

/// Same as encode_context(example, params, catalog) but reads item vectors
/// from the table; the results are bit-identical.
ContextEncoding<float> encode_context(const TrainingExample& example, const ModelParams& params,
                                      const ItemTable& table);

enum class Execution { Serial, Parallel };

struct RankOptions {
  bool post_filter = true;  // keep only items complementary to `base`
  ItemId base = 0;
  Execution execution = Execution::Parallel;
};

/// Top-k candidates by the variant's score, descending, ties by ascending id.
std::vector<ScoredItem> rank_candidates(const ContextEncoding<float>& ctx, std::span<const ItemId> candidates,
                                        std::size_t k, const ModelParams& params, const ItemTable& table,
                                        const Catalog& catalog, const RankOptions& options);

/// Ranks the whole catalog for an example with the complementary filter on.
class ModelRecommender {
 public:
  ModelRecommender(const ModelParams& params, const Catalog& catalog,
                   Execution execution = Execution::Parallel);

  std::vector<ItemId> recommend(const TrainingExample& example, std::size_t k) const;
  std::vector<ScoredItem> recommend_scored(const TrainingExample& example, std::size_t k) const;

  const ItemTable& table() const { return table_; }

 private:
  const ModelParams& params_;
  const Catalog& catalog_;
  ItemTable table_;
  std::vector<ItemId> all_items_;
  std::vector<CategoryId> item_category_;
  Execution execution_;
};

}  // namespace zsfc
