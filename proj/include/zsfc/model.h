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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/sampler.h"
#include "zsfc/tensor.h"

namespace zsfc {

/// Ablation grid. Each enhancement over the plain attention model can be
/// toggled independently; Zsfc enables all of them.
enum class ModelVariant : std::uint32_t {
  Stamp = 0,
  StampPlusOrders = 1,
  StampPlusCategory = 2,
  StampPlusImage = 3,
  Zsfc = 4,
};

inline constexpr ModelVariant kAllVariants[] = {ModelVariant::Stamp, ModelVariant::StampPlusOrders,
                                                ModelVariant::StampPlusCategory, ModelVariant::StampPlusImage,
                                                ModelVariant::Zsfc};

struct VariantTraits {
  bool order_head;       // h_o from purchase history, summed score
  bool category_fusion;  // metadata fusion MLP with category and event-type embeddings
  bool image_init;       // base embeddings start from image features
};

constexpr VariantTraits traits(ModelVariant v) {
  switch (v) {
    case ModelVariant::Stamp: return {false, false, false};
    case ModelVariant::StampPlusOrders: return {true, false, false};
    case ModelVariant::StampPlusCategory: return {false, true, false};
    case ModelVariant::StampPlusImage: return {false, false, true};
    case ModelVariant::Zsfc: return {true, true, true};
  }
  return {false, false, false};
}

/// Variants with an order head score with the additive form
/// (h_o + h_s + h_t) . x; the rest use the trilinear product <h_s, h_t, x>.
constexpr bool uses_sum_score(ModelVariant v) { return traits(v).order_head; }

std::string_view variant_name(ModelVariant v);
std::optional<ModelVariant> parse_variant(std::string_view name);

/// Event type an item embedding is modulated with. Candidates get their own type.
enum class FusedKind : std::uint8_t { Click = 0, Order = 1, Candidate = 2 };

template <typename T>
struct Params {
  ModelVariant variant = ModelVariant::Zsfc;
  std::uint64_t seed = 0;

  Matrix<T> item_emb;      // n_items x d
  Matrix<T> category_emb;  // n_categories x d
  Matrix<T> event_emb;     // 3 x d, rows indexed by FusedKind
  Matrix<T> fuse_w2;       // 3d x d
  Matrix<T> fuse_b2;       // 1 x d
  Matrix<T> fuse_w1;       // d x d
  Matrix<T> fuse_b1;       // 1 x d
  Matrix<T> session_w;     // d x d
  Matrix<T> session_b;
  Matrix<T> base_w;
  Matrix<T> base_b;
  Matrix<T> order_w;
  Matrix<T> order_b;
  Matrix<T> attn_w1;  // applied to each session item
  Matrix<T> attn_w2;  // applied to the base item
  Matrix<T> attn_w3;  // applied to the session mean
  Matrix<T> attn_b;
  Matrix<T> attn_w0;  // 1 x d

  /// All-zero parameters with the documented shapes.
  static Params zeros(ModelVariant variant, std::size_t n_items, std::size_t n_categories, std::size_t dim);

  std::size_t dim() const { return item_emb.cols(); }
  std::size_t n_items() const { return item_emb.rows(); }
  std::size_t n_categories() const { return category_emb.rows(); }

  /// Visits every tensor as (name, matrix) in the fixed checkpoint order.
  template <typename F>
  void for_each(F&& f) {
    f("item_emb", item_emb);
    f("category_emb", category_emb);
    f("event_emb", event_emb);
    f("fuse_w2", fuse_w2);
    f("fuse_b2", fuse_b2);
    f("fuse_w1", fuse_w1);
    f("fuse_b1", fuse_b1);
    f("session_w", session_w);
    f("session_b", session_b);
    f("base_w", base_w);
    f("base_b", base_b);
    f("order_w", order_w);
    f("order_b", order_b);
    f("attn_w1", attn_w1);
    f("attn_w2", attn_w2);
    f("attn_w3", attn_w3);
    f("attn_b", attn_b);
    f("attn_w0", attn_w0);
  }
  template <typename F>
  void for_each(F&& f) const {
    const_cast<Params*>(this)->for_each([&](const char* name, Matrix<T>& m) { f(name, std::as_const(m)); });
  }

  template <typename U>
  Params<U> cast() const {
    Params<U> out;
    out.variant = variant;
    out.seed = seed;
    auto src = tensor_list();
    auto dst = out.tensor_list();
    for (std::size_t i = 0; i < src.size(); ++i) *dst[i] = src[i]->template cast<U>();
    return out;
  }

  std::vector<Matrix<T>*> tensor_list() {
    std::vector<Matrix<T>*> out;
    for_each([&](const char*, Matrix<T>& m) { out.push_back(&m); });
    return out;
  }
  std::vector<const Matrix<T>*> tensor_list() const {
    std::vector<const Matrix<T>*> out;
    for_each([&](const char*, const Matrix<T>& m) { out.push_back(&m); });
    return out;
  }

  bool operator==(const Params&) const = default;
};

using ModelParams = Params<float>;

template <typename T>
struct ContextEncoding {
  std::vector<T> h_s;  // session (click) head
  std::vector<T> h_t;  // base item head
  std::vector<T> h_o;  // order head, zeros for variants without it
  std::vector<T> x_s;  // attention-pooled clicks
};

template <typename T>
T elu(T x);

/// Item representation for the given event type. With category fusion:
///   d = [m, m*g, g],  x = elu(W1^T elu(W2^T d + b2) + b1) * (1 + t_kind).
/// Without it the base embedding is used directly.
template <typename T>
std::vector<T> fuse_item_embedding(const Params<T>& params, const Catalog& catalog, ItemId item, FusedKind kind);

/// x_s = sum_j a_j x_j with a_j = w0 . sigmoid(W_a1 x_j + W_a2 base + W_a3 mean(x) + b_a).
/// Rows of `session` are the item vectors; an empty session pools to zero.
template <typename T>
std::vector<T> attention_pool(const Matrix<T>& session, std::span<const T> base, const Params<T>& params);

template <typename T>
ContextEncoding<T> encode_context(const TrainingExample& example, const Params<T>& params, const Catalog& catalog);

/// sum_k a[k] * b[k] * c[k]. Throws std::invalid_argument on length mismatch.
template <typename T>
T score_trilinear(std::span<const T> a, std::span<const T> b, std::span<const T> c);

/// (h_o + h_s + h_t) . x. Throws std::invalid_argument on length mismatch.
template <typename T>
T score_sum(std::span<const T> h_o, std::span<const T> h_s, std::span<const T> h_t, std::span<const T> x);

/// Vector u such that a candidate's score is u . x for the variant's scoring rule.
template <typename T>
std::vector<T> user_vector(const ContextEncoding<T>& ctx, ModelVariant variant);

/// Scores one candidate vector with the variant's scoring rule.
template <typename T>
T score_candidate(const ContextEncoding<T>& ctx, ModelVariant variant, std::span<const T> candidate);

enum class InitMode { Xavier, Image };

std::string_view init_mode_name(InitMode mode);
std::optional<InitMode> parse_init_mode(std::string_view name);

/// Xavier-uniform weights, zero biases; in Image mode the item embeddings are
/// copied from the catalog's image features (which must have width `dim`).
/// Each tensor draws from its own named sub-stream of `seed`.
ModelParams init_params(const Catalog& catalog, ModelVariant variant, std::size_t dim, InitMode mode,
                        std::uint64_t seed);

}  // namespace zsfc
