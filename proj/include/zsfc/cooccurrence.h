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

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "zsfc/common.h"
#include "zsfc/interactions.h"

namespace zsfc {

/// Symmetric sparse item-item counts: count(a, b) is the number of users
/// whose history contains both a and b. The diagonal is always zero.
class CooccurrenceMatrix {
 public:
  struct Entry {
    ItemId item;
    std::uint32_t count;
    bool operator==(const Entry&) const = default;
  };

  CooccurrenceMatrix() = default;
  /// `pairs` holds canonical (a < b) pair keys with their counts.
  CooccurrenceMatrix(std::size_t n_items, std::span<const std::pair<std::uint64_t, std::uint32_t>> pairs);

  std::size_t n_items() const { return rows_.size(); }
  std::size_t nnz_pairs() const { return n_pairs_; }

  std::uint32_t count(ItemId a, ItemId b) const;
  /// Non-zero entries of row `item`, ascending by item id. Empty for unknown ids.
  std::span<const Entry> row(ItemId item) const;

  bool operator==(const CooccurrenceMatrix&) const = default;

 private:
  std::vector<std::vector<Entry>> rows_;
  std::size_t n_pairs_ = 0;
};

/// Per-user binary co-presence counts over the whole history. Users are
/// sharded across OpenMP threads; the result does not depend on the split.
CooccurrenceMatrix build_cooccurrence(std::span<const UserHistory> histories, std::size_t n_items);

/// The `n` items with the highest count against `item` (count > 0), ties by
/// ascending id, returned ascending by id.
std::vector<ItemId> top_cooccurring(const CooccurrenceMatrix& matrix, ItemId item, std::size_t n);

}  // namespace zsfc
