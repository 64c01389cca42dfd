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
#include "zsfc/sampler.h"

#include <algorithm>
#include <stdexcept>

namespace zsfc {

void SamplerConfig::validate() const {
  if (max_clicks == 0 || max_orders == 0 || click_window <= 0 || order_window <= 0 || lookahead <= 0 ||
      purchase_horizon <= 0 || top_n == 0) {
    throw std::invalid_argument("sampler config values must be positive");
  }
}

namespace {

// Most recent `cap` events of `kind` with timestamp in [t - window, t),
// returned oldest to newest. `end` is the first event index at or after t.
std::vector<ItemId> recent_context(const std::vector<InteractionEvent>& events, std::size_t end, EventKind kind,
                                   Timestamp t, Timestamp window, std::size_t cap) {
  std::vector<ItemId> out;
  for (std::size_t i = end; i-- > 0 && out.size() < cap;) {
    const auto& e = events[i];
    if (e.timestamp < t - window) break;
    if (e.kind == kind) out.push_back(e.item);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<TrainingExample> extract_examples(const UserHistory& history, const CooccurrenceMatrix& matrix,
                                              const Catalog& catalog, const SamplerConfig& config) {
  const auto& ev = history.events;
  std::vector<TrainingExample> out;
  std::vector<ItemId> targets;

  for (std::size_t j = 0; j < ev.size(); ++j) {
    if (ev[j].kind != EventKind::Click) continue;
    const Timestamp t = ev[j].timestamp;
    const ItemId base = ev[j].item;

    // Events with the same timestamp as the base are neither context nor candidates.
    std::size_t first_after = j;
    while (first_after < ev.size() && ev[first_after].timestamp <= t) ++first_after;
    std::size_t first_at = j;
    while (first_at > 0 && ev[first_at - 1].timestamp >= t) --first_at;

    targets.clear();
    for (std::size_t c = first_after; c < ev.size() && ev[c].timestamp <= t + config.lookahead; ++c) {
      if (!catalog.is_complementary(base, ev[c].item)) continue;
      targets.push_back(ev[c].item);
    }
    if (targets.empty()) continue;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    std::vector<ItemId> bought;
    for (std::size_t o = first_after; o < ev.size() && ev[o].timestamp <= t + config.purchase_horizon; ++o) {
      if (ev[o].kind == EventKind::Order) bought.push_back(ev[o].item);
    }
    std::sort(bought.begin(), bought.end());
    std::erase_if(targets, [&](ItemId x) { return !std::binary_search(bought.begin(), bought.end(), x); });
    if (targets.empty()) continue;

    const auto frequent = top_cooccurring(matrix, base, config.top_n);
    std::erase_if(targets, [&](ItemId x) { return !std::binary_search(frequent.begin(), frequent.end(), x); });
    if (targets.empty()) continue;

    auto clicks = recent_context(ev, first_at, EventKind::Click, t, config.click_window, config.max_clicks);
    auto orders = recent_context(ev, first_at, EventKind::Order, t, config.order_window, config.max_orders);
    const Timestamp day = utc_day(t);
    for (ItemId target : targets) {
      TrainingExample ex;
      ex.user = history.user;
      ex.clicks = clicks;
      ex.orders = orders;
      ex.base = base;
      ex.target = target;
      ex.base_time = t;
      for (std::size_t o = first_after; o < ev.size() && utc_day(ev[o].timestamp) == day; ++o) {
        if (ev[o].kind == EventKind::Order && ev[o].item == target) {
          ex.ordered_within_day = true;
          break;
        }
      }
      out.push_back(std::move(ex));
    }
  }
  return out;
}

TrainingExample context_at(const UserHistory& history, Timestamp t, const SamplerConfig& config) {
  const auto& ev = history.events;
  const auto end = static_cast<std::size_t>(
      std::lower_bound(ev.begin(), ev.end(), t, [](const InteractionEvent& e, Timestamp x) { return e.timestamp < x; }) -
      ev.begin());
  TrainingExample ex;
  ex.user = history.user;
  ex.base_time = t;
  ex.clicks = recent_context(ev, end, EventKind::Click, t, config.click_window, config.max_clicks);
  ex.orders = recent_context(ev, end, EventKind::Order, t, config.order_window, config.max_orders);
  return ex;
}

std::vector<TrainingExample> extract_all(std::span<const UserHistory> histories, const CooccurrenceMatrix& matrix,
                                         const Catalog& catalog, const SamplerConfig& config) {
  config.validate();
  std::vector<std::vector<TrainingExample>> per_user(histories.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t u = 0; u < histories.size(); ++u) {
    per_user[u] = extract_examples(histories[u], matrix, catalog, config);
  }
  std::vector<TrainingExample> out;
  for (auto& v : per_user) {
    for (auto& e : v) out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(), [](const TrainingExample& a, const TrainingExample& b) {
    if (a.user != b.user) return a.user < b.user;
    if (a.base_time != b.base_time) return a.base_time < b.base_time;
    return a.target < b.target;
  });
  return out;
}

DatasetSplit split_by_time(std::span<const TrainingExample> examples, Timestamp corpus_end) {
  DatasetSplit split;
  const Timestamp last_day = utc_day(corpus_end);
  for (const auto& e : examples) {
    (utc_day(e.base_time) == last_day ? split.test : split.train).push_back(e);
  }
  return split;
}

}  // namespace zsfc
