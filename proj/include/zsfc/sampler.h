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
#include <span>
#include <utility>
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/cooccurrence.h"
#include "zsfc/interactions.h"

namespace zsfc {

struct SamplerConfig {
  std::size_t max_clicks = 15;                    // most recent clicks kept as context
  std::size_t max_orders = 5;                     // most recent orders kept as context
  Timestamp click_window = 9 * kSecondsPerDay;
  Timestamp order_window = 90 * kSecondsPerDay;
  Timestamp lookahead = kSecondsPerHour;          // candidate targets after the base click
  Timestamp purchase_horizon = kSecondsPerDay;    // target must be ordered within this
  std::size_t top_n = 200;                        // co-occurrence frequency filter

  void validate() const;
};

/// A complementary (base, target) pair with the user's context at base time.
/// Context lists are oldest to newest.
struct TrainingExample {
  std::uint64_t user = 0;
  std::vector<ItemId> clicks;
  std::vector<ItemId> orders;
  ItemId base = 0;
  ItemId target = 0;
  Timestamp base_time = 0;
  bool ordered_within_day = false;

  bool operator==(const TrainingExample&) const = default;
  auto operator<=>(const TrainingExample&) const = default;
};

/// Emits every training example rooted at a click of `history`:
///   1. events in (t, t + lookahead] are potential targets,
///   2. keep those complementary to the clicked item,
///   3. keep those the user orders in (t, t + purchase_horizon],
///   4. keep those among the top_n co-occurring items of the clicked item.
/// One example per distinct surviving target item per base click.
std::vector<TrainingExample> extract_examples(const UserHistory& history, const CooccurrenceMatrix& matrix,
                                              const Catalog& catalog, const SamplerConfig& config);

/// extract_examples over every history (OpenMP across users), sorted by
/// (user, base_time, target) with emission order as the final tie-break.
std::vector<TrainingExample> extract_all(std::span<const UserHistory> histories, const CooccurrenceMatrix& matrix,
                                         const Catalog& catalog, const SamplerConfig& config);

/// Context for a request at time `t`: the most recent clicks and orders
/// strictly before `t` inside their windows, oldest to newest. `history`
/// must be sorted.
TrainingExample context_at(const UserHistory& history, Timestamp t, const SamplerConfig& config);

struct DatasetSplit {
  std::vector<TrainingExample> train;
  std::vector<TrainingExample> test;
};

/// Examples whose base click falls on the UTC day of `corpus_end` form the
/// test set; everything else is training data. Relative order is kept.
DatasetSplit split_by_time(std::span<const TrainingExample> examples, Timestamp corpus_end);

}  // namespace zsfc
