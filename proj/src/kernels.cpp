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
#include "zsfc/kernels.h"

#include <omp.h>

#include <algorithm>
#include <cassert>

namespace zsfc::kernels {

float dot(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
#pragma omp simd reduction(+ : acc)
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void score_serial(const EmbeddingView& table, std::span<const ItemId> candidates, std::span<const float> user,
                  std::span<float> out) {
  assert(out.size() == candidates.size() && user.size() == table.dim);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[i] = dot(table.row(candidates[i]).data(), user.data(), table.dim);
  }
}

void score_parallel(const EmbeddingView& table, std::span<const ItemId> candidates, std::span<const float> user,
                    std::span<float> out) {
  assert(out.size() == candidates.size() && user.size() == table.dim);
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = dot(table.row(candidates[i]).data(), user.data(), table.dim);
  }
}

std::vector<ScoredItem> top_k_serial(std::span<const ItemId> candidates, std::span<const float> scores,
                                     const CandidateFilter& filter, std::size_t k) {
  std::vector<ScoredItem> all;
  all.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (filter.keep(candidates[i])) all.push_back({candidates[i], scores[i]});
  }
  std::sort(all.begin(), all.end(), ranks_before);
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<ScoredItem> rank_serial(const EmbeddingView& table, std::span<const ItemId> candidates,
                                    std::span<const float> user, const CandidateFilter& filter, std::size_t k) {
  std::vector<float> scores(candidates.size());
  score_serial(table, candidates, user, scores);
  return top_k_serial(candidates, scores, filter, k);
}

namespace {

// Bounded heap whose front is the worst kept element.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) { heap_.reserve(k + 1); }

  void push(const ScoredItem& s) {
    if (k_ == 0) return;
    if (heap_.size() < k_) {
      heap_.push_back(s);
      std::push_heap(heap_.begin(), heap_.end(), ranks_before);
    } else if (ranks_before(s, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), ranks_before);
      heap_.back() = s;
      std::push_heap(heap_.begin(), heap_.end(), ranks_before);
    }
  }

  std::vector<ScoredItem>& items() { return heap_; }

 private:
  std::size_t k_;
  std::vector<ScoredItem> heap_;
};

}  // namespace

std::vector<ScoredItem> rank_parallel(const EmbeddingView& table, std::span<const ItemId> candidates,
                                      std::span<const float> user, const CandidateFilter& filter, std::size_t k) {
  assert(user.size() == table.dim);
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
  std::vector<TopK> partial(static_cast<std::size_t>(omp_get_max_threads()), TopK(k));

#pragma omp parallel
  {
    TopK& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const ItemId item = candidates[i];
      if (!filter.keep(item)) continue;
      local.push({item, dot(table.row(item).data(), user.data(), table.dim)});
    }
  }

  std::vector<ScoredItem> merged;
  for (auto& p : partial) merged.insert(merged.end(), p.items().begin(), p.items().end());
  std::sort(merged.begin(), merged.end(), ranks_before);
  if (merged.size() > k) merged.resize(k);
  return merged;
}

}  // namespace zsfc::kernels
