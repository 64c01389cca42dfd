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

#include "zsfc/catalog.h"
#include "zsfc/cooccurrence.h"

namespace zsfc {

struct Neighbor {
  ItemId item = 0;
  double cosine = 0.0;
  bool operator==(const Neighbor&) const = default;
};

/// Item-to-item collaborative filtering over co-occurrence rows. Item
/// vectors are rows of the matrix; similarity is cosine.
class CFModel {
 public:
  explicit CFModel(const CooccurrenceMatrix& matrix);

  std::size_t n_items() const { return matrix_->n_items(); }
  /// Cosine of rows a and b; 0 when either row is all zero.
  double cosine(ItemId a, ItemId b) const;
  /// Every item with positive cosine to `item` (excluding itself), by
  /// descending cosine (compared exactly on the integer counts) then
  /// ascending id. Empty for an all-zero row.
  std::vector<Neighbor> neighbors(ItemId item) const;

 private:
  const CooccurrenceMatrix* matrix_;
  std::vector<double> norm_;
  std::vector<std::uint64_t> norm2_;  // squared row norms
};

/// CF-c: neighbours of `base` that are complementary to it; when fewer than
/// `k` survive, each kept item in turn contributes its own complementary
/// neighbours (deduplicated, never `base`) until `k` items are collected.
/// Throws std::out_of_range for an unknown base.
std::vector<ItemId> cf_c_recommend(const CFModel& cf, ItemId base, std::size_t k, const Catalog& catalog);

}  // namespace zsfc
