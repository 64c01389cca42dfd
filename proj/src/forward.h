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

// Forward passes that keep their intermediates, shared by inference and by
// the hand-written backward pass in training.cpp.

#include <cmath>
#include <span>
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/model.h"
#include "zsfc/tensor.h"

namespace zsfc::detail {

template <typename T>
inline T elu_value(T x) {
  return x > T(0) ? x : std::expm1(x);
}

// d elu / dx expressed through the pre-activation.
template <typename T>
inline T elu_slope(T x) {
  return x > T(0) ? T(1) : std::exp(x);
}

template <typename T>
inline T sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

template <typename T>
struct FusionTrace {
  std::vector<T> input;   // [m, m*g, g]
  std::vector<T> pre2;    // W2^T d + b2
  std::vector<T> hidden;  // elu(pre2)
  std::vector<T> pre1;    // W1^T hidden + b1
};

// Event-independent part of the item representation: the fused MLP output,
// or the raw base embedding when the variant has no category fusion.
template <typename T>
void fuse_base(const Params<T>& p, const Catalog& catalog, ItemId item, std::span<T> out,
               FusionTrace<T>* trace = nullptr) {
  const std::size_t d = p.dim();
  auto m = p.item_emb.row(item);
  if (!traits(p.variant).category_fusion) {
    std::copy(m.begin(), m.end(), out.begin());
    return;
  }
  auto g = p.category_emb.row(catalog.category(item));
  FusionTrace<T> local;
  FusionTrace<T>& tr = trace ? *trace : local;
  tr.input.resize(3 * d);
  for (std::size_t k = 0; k < d; ++k) {
    tr.input[k] = m[k];
    tr.input[d + k] = m[k] * g[k];
    tr.input[2 * d + k] = g[k];
  }
  tr.pre2.resize(d);
  tr.hidden.resize(d);
  tr.pre1.resize(d);
  affine_t<T>(p.fuse_w2, tr.input, p.fuse_b2.row(0), tr.pre2);
  for (std::size_t k = 0; k < d; ++k) tr.hidden[k] = elu_value(tr.pre2[k]);
  affine_t<T>(p.fuse_w1, tr.hidden, p.fuse_b1.row(0), tr.pre1);
  for (std::size_t k = 0; k < d; ++k) out[k] = elu_value(tr.pre1[k]);
}

// x = base * (1 + t_kind); plain variants keep t pinned at zero.
template <typename T>
void apply_event(const Params<T>& p, FusedKind kind, std::span<const T> base, std::span<T> out) {
  if (!traits(p.variant).category_fusion) {
    std::copy(base.begin(), base.end(), out.begin());
    return;
  }
  auto t = p.event_emb.row(static_cast<std::size_t>(kind));
  for (std::size_t k = 0; k < base.size(); ++k) out[k] = base[k] * (T(1) + t[k]);
}

template <typename T>
struct ContextTrace {
  Matrix<T> clicks;  // fused click vectors, oldest first
  Matrix<T> orders;  // fused order vectors
  std::vector<T> base;
  std::vector<T> click_mean;
  Matrix<T> attn_gate;  // sigmoid(p_j) per click
  std::vector<T> attn_weight;
  std::vector<T> x_s;
  std::vector<T> x_o;
  std::vector<T> h_s;
  std::vector<T> h_t;
  std::vector<T> h_o;
};

template <typename T>
void tanh_head(const Matrix<T>& w, const Matrix<T>& b, std::span<const T> x, std::vector<T>& h) {
  h.resize(w.cols());
  affine_t<T>(w, x, b.row(0), h);
  for (auto& v : h) v = std::tanh(v);
}

// Attention pooling; fills click_mean, attn_gate, attn_weight and x_s.
template <typename T>
void attention_forward(const Params<T>& p, ContextTrace<T>& tr) {
  const std::size_t d = p.dim();
  const std::size_t n = tr.clicks.rows();
  tr.x_s.assign(d, T(0));
  tr.click_mean.assign(d, T(0));
  tr.attn_weight.assign(n, T(0));
  tr.attn_gate = Matrix<T>(n, d);
  if (n == 0) return;
  for (std::size_t j = 0; j < n; ++j) axpy<T>(T(1), tr.clicks.row(j), tr.click_mean);
  for (auto& v : tr.click_mean) v /= static_cast<T>(n);

  std::vector<T> shared(p.attn_b.row(0).begin(), p.attn_b.row(0).end());
  add_matvec<T>(p.attn_w2, tr.base, shared);
  add_matvec<T>(p.attn_w3, tr.click_mean, shared);
  auto w0 = p.attn_w0.row(0);
  for (std::size_t j = 0; j < n; ++j) {
    auto gate = tr.attn_gate.row(j);
    std::copy(shared.begin(), shared.end(), gate.begin());
    add_matvec<T>(p.attn_w1, tr.clicks.row(j), gate);
    for (auto& v : gate) v = sigmoid(v);
    tr.attn_weight[j] = dot<T>(w0, gate);
    axpy<T>(tr.attn_weight[j], tr.clicks.row(j), tr.x_s);
  }
}

// Everything downstream of the fused item vectors (clicks, orders, base
// already placed in the trace).
template <typename T>
void context_forward(const Params<T>& p, ContextTrace<T>& tr) {
  const std::size_t d = p.dim();
  attention_forward(p, tr);
  tanh_head<T>(p.session_w, p.session_b, tr.x_s, tr.h_s);
  tanh_head<T>(p.base_w, p.base_b, tr.base, tr.h_t);
  tr.x_o.assign(d, T(0));
  if (!traits(p.variant).order_head) {
    tr.h_o.assign(d, T(0));
    return;
  }
  const std::size_t n = tr.orders.rows();
  for (std::size_t j = 0; j < n; ++j) axpy<T>(T(1), tr.orders.row(j), tr.x_o);
  if (n > 0) {
    for (auto& v : tr.x_o) v /= static_cast<T>(n);
  }
  tanh_head<T>(p.order_w, p.order_b, tr.x_o, tr.h_o);
}

template <typename T>
ContextEncoding<T> to_encoding(const ContextTrace<T>& tr) {
  return {tr.h_s, tr.h_t, tr.h_o, tr.x_s};
}

}  // namespace zsfc::detail
