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

// Candidate scoring and top-k selection. Every kernel exists in a serial
// reference form and an OpenMP form; both return identical results for any
// thread count (scores use the same dot product, selection a strict total
// order: higher score first, then lower item id).

#include <cstddef>
#include <span>
#include <vector>

#include "zsfc/common.h"

namespace zsfc {

struct ScoredItem {
  ItemId item = 0;
  float score = 0.0f;
  bool operator==(const ScoredItem&) const = default;
};

inline bool ranks_before(const ScoredItem& a, const ScoredItem& b) {
  return a.score != b.score ? a.score > b.score : a.item < b.item;
}

/// Row-major candidate embedding table (row = item id).
struct EmbeddingView {
  const float* data = nullptr;
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::span<const float> row(ItemId i) const { return {data + static_cast<std::size_t>(i) * dim, dim}; }
};

/// Optional complementary post-filter: candidate i survives iff
/// category_mask[item_category[i]] != 0. Empty spans disable filtering.
struct CandidateFilter {
  std::span<const CategoryId> item_category;
  std::span<const char> category_mask;
  bool enabled() const { return !category_mask.empty(); }
  bool keep(ItemId i) const { return !enabled() || category_mask[item_category[i]] != 0; }
};

namespace kernels {

float dot(const float* a, const float* b, std::size_t n);

void score_serial(const EmbeddingView& table, std::span<const ItemId> candidates, std::span<const float> user,
                  std::span<float> out);
void score_parallel(const EmbeddingView& table, std::span<const ItemId> candidates, std::span<const float> user,
                    std::span<float> out);

/// Top-k of precomputed scores (serial reference: full sort of survivors).
std::vector<ScoredItem> top_k_serial(std::span<const ItemId> candidates, std::span<const float> scores,
                                     const CandidateFilter& filter, std::size_t k);

/// Scores and selects in one pass; per-thread bounded heaps merged at the end.
std::vector<ScoredItem> rank_parallel(const EmbeddingView& table, std::span<const ItemId> candidates,
                                      std::span<const float> user, const CandidateFilter& filter, std::size_t k);

/// Reference: score_serial followed by top_k_serial.
std::vector<ScoredItem> rank_serial(const EmbeddingView& table, std::span<const ItemId> candidates,
                                    std::span<const float> user, const CandidateFilter& filter, std::size_t k);

}  // namespace kernels
}  // namespace zsfc
