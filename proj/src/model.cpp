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
#include "zsfc/model.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "forward.h"
#include "zsfc/rng.h"

namespace zsfc {

std::string_view variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::Stamp: return "stamp";
    case ModelVariant::StampPlusOrders: return "stamp+orders";
    case ModelVariant::StampPlusCategory: return "stamp+category";
    case ModelVariant::StampPlusImage: return "stamp+image";
    case ModelVariant::Zsfc: return "zsfc";
  }
  return "unknown";
}

std::optional<ModelVariant> parse_variant(std::string_view name) {
  for (auto v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

std::string_view init_mode_name(InitMode mode) { return mode == InitMode::Image ? "image" : "xavier"; }

std::optional<InitMode> parse_init_mode(std::string_view name) {
  if (name == "xavier") return InitMode::Xavier;
  if (name == "image") return InitMode::Image;
  return std::nullopt;
}

template <typename T>
Params<T> Params<T>::zeros(ModelVariant variant, std::size_t n_items, std::size_t n_categories, std::size_t dim) {
  Params p;
  p.variant = variant;
  p.item_emb = Matrix<T>(n_items, dim);
  p.category_emb = Matrix<T>(n_categories, dim);
  p.event_emb = Matrix<T>(3, dim);
  p.fuse_w2 = Matrix<T>(3 * dim, dim);
  p.fuse_b2 = Matrix<T>(1, dim);
  p.fuse_w1 = Matrix<T>(dim, dim);
  p.fuse_b1 = Matrix<T>(1, dim);
  for (auto* m : {&p.session_w, &p.base_w, &p.order_w, &p.attn_w1, &p.attn_w2, &p.attn_w3}) {
    *m = Matrix<T>(dim, dim);
  }
  for (auto* b : {&p.session_b, &p.base_b, &p.order_b, &p.attn_b, &p.attn_w0}) *b = Matrix<T>(1, dim);
  return p;
}

template <typename T>
T elu(T x) {
  return detail::elu_value(x);
}

template <typename T>
std::vector<T> fuse_item_embedding(const Params<T>& params, const Catalog& catalog, ItemId item, FusedKind kind) {
  if (item >= params.n_items()) throw std::out_of_range("unknown item id " + std::to_string(item));
  std::vector<T> base(params.dim());
  detail::fuse_base<T>(params, catalog, item, base);
  std::vector<T> out(params.dim());
  detail::apply_event<T>(params, kind, base, out);
  return out;
}

template <typename T>
std::vector<T> attention_pool(const Matrix<T>& session, std::span<const T> base, const Params<T>& params) {
  detail::ContextTrace<T> tr;
  tr.clicks = session;
  tr.base.assign(base.begin(), base.end());
  detail::attention_forward(params, tr);
  return tr.x_s;
}

template <typename T>
ContextEncoding<T> encode_context(const TrainingExample& example, const Params<T>& params, const Catalog& catalog) {
  const std::size_t d = params.dim();
  detail::ContextTrace<T> tr;
  tr.clicks = Matrix<T>(example.clicks.size(), d);
  for (std::size_t j = 0; j < example.clicks.size(); ++j) {
    auto v = fuse_item_embedding(params, catalog, example.clicks[j], FusedKind::Click);
    std::copy(v.begin(), v.end(), tr.clicks.row(j).begin());
  }
  tr.orders = Matrix<T>(example.orders.size(), d);
  for (std::size_t j = 0; j < example.orders.size(); ++j) {
    auto v = fuse_item_embedding(params, catalog, example.orders[j], FusedKind::Order);
    std::copy(v.begin(), v.end(), tr.orders.row(j).begin());
  }
  tr.base = fuse_item_embedding(params, catalog, example.base, FusedKind::Candidate);
  detail::context_forward(params, tr);
  return detail::to_encoding(tr);
}

template <typename T>
T score_trilinear(std::span<const T> a, std::span<const T> b, std::span<const T> c) {
  if (a.size() != b.size() || a.size() != c.size()) throw std::invalid_argument("score_trilinear: length mismatch");
  T acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k] * c[k];
  return acc;
}

template <typename T>
T score_sum(std::span<const T> h_o, std::span<const T> h_s, std::span<const T> h_t, std::span<const T> x) {
  if (h_o.size() != x.size() || h_s.size() != x.size() || h_t.size() != x.size()) {
    throw std::invalid_argument("score_sum: length mismatch");
  }
  T acc = 0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += (h_o[k] + h_s[k] + h_t[k]) * x[k];
  return acc;
}

template <typename T>
std::vector<T> user_vector(const ContextEncoding<T>& ctx, ModelVariant variant) {
  std::vector<T> u(ctx.h_t.size());
  if (uses_sum_score(variant)) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = ctx.h_o[k] + ctx.h_s[k] + ctx.h_t[k];
  } else {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = ctx.h_s[k] * ctx.h_t[k];
  }
  return u;
}

template <typename T>
T score_candidate(const ContextEncoding<T>& ctx, ModelVariant variant, std::span<const T> candidate) {
  if (uses_sum_score(variant)) return score_sum<T>(ctx.h_o, ctx.h_s, ctx.h_t, candidate);
  return score_trilinear<T>(ctx.h_s, ctx.h_t, candidate);
}

ModelParams init_params(const Catalog& catalog, ModelVariant variant, std::size_t dim, InitMode mode,
                        std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
  ModelParams p = ModelParams::zeros(variant, catalog.size(), catalog.hierarchy().size(), dim);
  p.seed = seed;
  p.for_each([&](const char* name, Matrix<float>& m) {
    const std::string n(name);
    const bool bias = n.size() > 2 && n.compare(n.size() - 2, 2, "_b") == 0;
    if (bias || n == "fuse_b2" || n == "fuse_b1") return;
    const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    std::uniform_real_distribution<float> dist(static_cast<float>(-bound), static_cast<float>(bound));
    Rng rng = make_rng(seed, "init/" + n);
    for (auto& v : m.flat()) v = dist(rng);
  });
  if (mode == InitMode::Image) {
    if (!catalog.all_have_features()) throw DataError("image initialisation needs image features for every item");
    if (catalog.feature_dim() != dim) {
      throw DataError("image feature width " + std::to_string(catalog.feature_dim()) + " != embedding dimension " +
                      std::to_string(dim));
    }
    for (ItemId i = 0; i < catalog.size(); ++i) {
      const auto& f = catalog.entry(i).image_features;
      std::copy(f.begin(), f.end(), p.item_emb.row(i).begin());
    }
  }
  return p;
}

#define ZSFC_INSTANTIATE(T)                                                                                     \
  template struct Params<T>;                                                                                    \
  template T elu<T>(T);                                                                                         \
  template std::vector<T> fuse_item_embedding<T>(const Params<T>&, const Catalog&, ItemId, FusedKind);          \
  template std::vector<T> attention_pool<T>(const Matrix<T>&, std::span<const T>, const Params<T>&);            \
  template ContextEncoding<T> encode_context<T>(const TrainingExample&, const Params<T>&, const Catalog&);       \
  template T score_trilinear<T>(std::span<const T>, std::span<const T>, std::span<const T>);                    \
  template T score_sum<T>(std::span<const T>, std::span<const T>, std::span<const T>, std::span<const T>);      \
  template std::vector<T> user_vector<T>(const ContextEncoding<T>&, ModelVariant);                              \
  template T score_candidate<T>(const ContextEncoding<T>&, ModelVariant, std::span<const T>);

ZSFC_INSTANTIATE(float)
ZSFC_INSTANTIATE(double)
ZSFC_INSTANTIATE(long double)

}  // namespace zsfc
