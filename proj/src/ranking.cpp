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
#include "zsfc/ranking.h"

#include <numeric>
#include <stdexcept>

#include "forward.h"

namespace zsfc {

ItemTable build_item_table(const ModelParams& params, const Catalog& catalog) {
  const std::size_t n = params.n_items();
  const std::size_t d = params.dim();
  ItemTable t{Matrix<float>(n, d), Matrix<float>(n, d)};
#pragma omp parallel for schedule(dynamic, 256)
  for (std::size_t i = 0; i < n; ++i) {
    detail::fuse_base<float>(params, catalog, static_cast<ItemId>(i), t.fused.row(i));
    detail::apply_event<float>(params, FusedKind::Candidate, t.fused.row(i), t.candidate.row(i));
  }
  return t;
}

ContextEncoding<float> encode_context(const TrainingExample& example, const ModelParams& params,
                                      const ItemTable& table) {
  const std::size_t d = params.dim();
  detail::ContextTrace<float> tr;
  tr.clicks = Matrix<float>(example.clicks.size(), d);
  for (std::size_t j = 0; j < example.clicks.size(); ++j) {
    detail::apply_event<float>(params, FusedKind::Click, table.fused.row(example.clicks.at(j)), tr.clicks.row(j));
  }
  tr.orders = Matrix<float>(example.orders.size(), d);
  for (std::size_t j = 0; j < example.orders.size(); ++j) {
    detail::apply_event<float>(params, FusedKind::Order, table.fused.row(example.orders.at(j)), tr.orders.row(j));
  }
  auto base = table.candidate.row(example.base);
  tr.base.assign(base.begin(), base.end());
  detail::context_forward(params, tr);
  return detail::to_encoding(tr);
}

std::vector<ScoredItem> rank_candidates(const ContextEncoding<float>& ctx, std::span<const ItemId> candidates,
                                        std::size_t k, const ModelParams& params, const ItemTable& table,
                                        const Catalog& catalog, const RankOptions& options) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  for (ItemId c : candidates) {
    if (c >= table.candidate.rows()) throw std::out_of_range("unknown candidate id " + std::to_string(c));
  }
  const auto user = user_vector(ctx, params.variant);
  std::vector<CategoryId> item_category;
  std::vector<char> mask;
  CandidateFilter filter;
  if (options.post_filter) {
    mask = catalog.complementary_category_mask(catalog.category(options.base));
    item_category.resize(catalog.size());
    for (ItemId i = 0; i < catalog.size(); ++i) item_category[i] = catalog.category(i);
    filter = {item_category, mask};
  }
  const auto view = table.candidates_view();
  return options.execution == Execution::Serial ? kernels::rank_serial(view, candidates, user, filter, k)
                                                : kernels::rank_parallel(view, candidates, user, filter, k);
}

ModelRecommender::ModelRecommender(const ModelParams& params, const Catalog& catalog, Execution execution)
    : params_(params),
      catalog_(catalog),
      table_(build_item_table(params, catalog)),
      all_items_(catalog.size()),
      item_category_(catalog.size()),
      execution_(execution) {
  std::iota(all_items_.begin(), all_items_.end(), ItemId{0});
  for (ItemId i = 0; i < catalog.size(); ++i) item_category_[i] = catalog.category(i);
}

std::vector<ScoredItem> ModelRecommender::recommend_scored(const TrainingExample& example, std::size_t k) const {
  const auto ctx = encode_context(example, params_, table_);
  const auto user = user_vector(ctx, params_.variant);
  const auto mask = catalog_.complementary_category_mask(catalog_.category(example.base));
  const CandidateFilter filter{item_category_, mask};
  const auto view = table_.candidates_view();
  return execution_ == Execution::Serial ? kernels::rank_serial(view, all_items_, user, filter, k)
                                         : kernels::rank_parallel(view, all_items_, user, filter, k);
}

std::vector<ItemId> ModelRecommender::recommend(const TrainingExample& example, std::size_t k) const {
  std::vector<ItemId> out;
  for (const auto& s : recommend_scored(example, k)) out.push_back(s.item);
  return out;
}

}  // namespace zsfc
