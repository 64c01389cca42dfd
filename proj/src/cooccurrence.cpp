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
#include "zsfc/cooccurrence.h"

#include <omp.h>

#include <algorithm>
#include <unordered_map>

namespace zsfc {

CooccurrenceMatrix::CooccurrenceMatrix(std::size_t n_items,
                                       std::span<const std::pair<std::uint64_t, std::uint32_t>> pairs)
    : rows_(n_items) {
  for (auto [key, count] : pairs) {
    if (count == 0) continue;
    auto a = static_cast<ItemId>(key >> 32);
    auto b = static_cast<ItemId>(key & 0xffffffffu);
    if (a == b || a >= n_items || b >= n_items) continue;
    rows_[a].push_back({b, count});
    rows_[b].push_back({a, count});
    ++n_pairs_;
  }
  for (auto& r : rows_) std::sort(r.begin(), r.end(), [](const Entry& x, const Entry& y) { return x.item < y.item; });
}

std::uint32_t CooccurrenceMatrix::count(ItemId a, ItemId b) const {
  if (a >= rows_.size() || b >= rows_.size()) return 0;
  const auto& r = rows_[a];
  auto it = std::lower_bound(r.begin(), r.end(), b, [](const Entry& e, ItemId id) { return e.item < id; });
  return (it != r.end() && it->item == b) ? it->count : 0;
}

std::span<const CooccurrenceMatrix::Entry> CooccurrenceMatrix::row(ItemId item) const {
  if (item >= rows_.size()) return {};
  return rows_[item];
}

CooccurrenceMatrix build_cooccurrence(std::span<const UserHistory> histories, std::size_t n_items) {
  using Counts = std::unordered_map<std::uint64_t, std::uint32_t>;
  std::vector<Counts> shards(static_cast<std::size_t>(omp_get_max_threads()));

#pragma omp parallel
  {
    Counts& local = shards[static_cast<std::size_t>(omp_get_thread_num())];
    std::vector<ItemId> items;
#pragma omp for schedule(dynamic, 16)
    for (std::size_t u = 0; u < histories.size(); ++u) {
      items.clear();
      for (const auto& e : histories[u].events) items.push_back(e.item);
      std::sort(items.begin(), items.end());
      items.erase(std::unique(items.begin(), items.end()), items.end());
      for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
          ++local[(static_cast<std::uint64_t>(items[i]) << 32) | items[j]];
        }
      }
    }
  }

  Counts merged = std::move(shards[0]);
  for (std::size_t s = 1; s < shards.size(); ++s) {
    for (auto [k, c] : shards[s]) merged[k] += c;
  }
  std::vector<std::pair<std::uint64_t, std::uint32_t>> pairs(merged.begin(), merged.end());
  return CooccurrenceMatrix(n_items, pairs);
}

std::vector<ItemId> top_cooccurring(const CooccurrenceMatrix& matrix, ItemId item, std::size_t n) {
  auto row = matrix.row(item);
  std::vector<CooccurrenceMatrix::Entry> ranked(row.begin(), row.end());
  auto better = [](const auto& a, const auto& b) { return a.count != b.count ? a.count > b.count : a.item < b.item; };
  if (ranked.size() > n) {
    std::nth_element(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end(), better);
    ranked.resize(n);
  }
  std::vector<ItemId> out;
  out.reserve(ranked.size());
  for (const auto& e : ranked) out.push_back(e.item);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace zsfc
