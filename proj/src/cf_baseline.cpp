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

#include "zsfc/cf_baseline.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace zsfc {

CFModel::CFModel(const CooccurrenceMatrix& matrix)
    : matrix_(&matrix), norm_(matrix.n_items(), 0.0), norm2_(matrix.n_items(), 0) {
  for (ItemId i = 0; i < matrix.n_items(); ++i) {
    for (const auto& e : matrix.row(i)) norm2_[i] += static_cast<std::uint64_t>(e.count) * e.count;
    norm_[i] = std::sqrt(static_cast<double>(norm2_[i]));
  }
}

double CFModel::cosine(ItemId a, ItemId b) const {
  if (a >= n_items() || b >= n_items()) throw std::out_of_range("unknown item id");
  if (norm_[a] == 0.0 || norm_[b] == 0.0) return 0.0;
  auto ra = matrix_->row(a);
  auto rb = matrix_->row(b);
  std::uint64_t dot = 0;
  auto ia = ra.begin();
  auto ib = rb.begin();
  while (ia != ra.end() && ib != rb.end()) {
    if (ia->item < ib->item) {
      ++ia;
    } else if (ib->item < ia->item) {
      ++ib;
    } else {
      dot += static_cast<std::uint64_t>(ia->count) * ib->count;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(dot) / (norm_[a] * norm_[b]);
}

std::vector<Neighbor> CFModel::neighbors(ItemId item) const {
  if (item >= n_items()) throw std::out_of_range("unknown item id " + std::to_string(item));
  std::vector<Neighbor> out;
  if (norm_[item] == 0.0) return out;
  // Two-hop walk: only items sharing a co-occurring partner have a nonzero dot.
  std::unordered_map<ItemId, std::uint64_t> dots;
  for (const auto& mid : matrix_->row(item)) {
    for (const auto& e : matrix_->row(mid.item)) {
      if (e.item != item) dots[e.item] += static_cast<std::uint64_t>(mid.count) * e.count;
    }
  }
  // Order on exact integers: cos(i, a) > cos(i, b) iff dot_a^2 |b|^2 > dot_b^2 |a|^2.
  using Wide = unsigned __int128;
  std::vector<std::pair<ItemId, std::uint64_t>> ranked(dots.begin(), dots.end());
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    const Wide lhs = Wide(a.second) * a.second * norm2_[b.first];
    const Wide rhs = Wide(b.second) * b.second * norm2_[a.first];
    return lhs != rhs ? lhs > rhs : a.first < b.first;
  });
  out.reserve(ranked.size());
  for (const auto& [other, dot] : ranked) {
    out.push_back({other, static_cast<double>(dot) / (norm_[item] * norm_[other])});
  }
  return out;
}

std::vector<ItemId> cf_c_recommend(const CFModel& cf, ItemId base, std::size_t k, const Catalog& catalog) {
  if (base >= cf.n_items() || base >= catalog.size()) {
    throw std::out_of_range("unknown base item " + std::to_string(base));
  }
  std::vector<ItemId> out;
  if (k == 0) return out;
  std::unordered_set<ItemId> seen{base};
  auto take = [&](ItemId item) {
    if (out.size() < k && catalog.is_complementary(base, item) && seen.insert(item).second) out.push_back(item);
  };
  for (const auto& n : cf.neighbors(base)) take(n.item);
  const std::size_t direct = out.size();
  for (std::size_t i = 0; i < direct && out.size() < k; ++i) {
    for (const auto& n : cf.neighbors(out[i])) {
      if (out.size() >= k) break;
      take(n.item);
    }
  }
  return out;
}

}  // namespace zsfc
