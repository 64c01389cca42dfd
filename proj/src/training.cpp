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
#include "zsfc/training.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "forward.h"

namespace zsfc {

InitMode TrainConfig::init_mode() const {
  if (init) return *init;
  return traits(variant).image_init ? InitMode::Image : InitMode::Xavier;
}

void TrainConfig::validate(std::size_t vocab) const {
  if (dim == 0 || batch_size == 0 || negatives == 0 || !(learning_rate > 0.0)) {
    throw std::invalid_argument("training hyperparameters must be positive");
  }
  if (negatives + 2 > vocab) {
    throw std::invalid_argument("negatives_per_example (" + std::to_string(negatives) +
                                ") must leave room for target and base in a vocabulary of " + std::to_string(vocab));
  }
}

// ---------------------------------------------------------------------------
// SparseRows / Gradients

template <typename T>
std::span<T> SparseRows<T>::touch(std::size_t row) {
  auto& s = slot_[row];
  if (s < 0) {
    s = static_cast<std::int32_t>(rows_.size());
    rows_.push_back(static_cast<ItemId>(row));
    data_.resize(data_.size() + dim_, T(0));
  }
  return {data_.data() + static_cast<std::size_t>(s) * dim_, dim_};
}

template <typename T>
std::span<const T> SparseRows<T>::get(std::size_t row) const {
  const auto s = slot_[row];
  if (s < 0) return {};
  return {data_.data() + static_cast<std::size_t>(s) * dim_, dim_};
}

template <typename T>
T SparseRows<T>::at(std::size_t row, std::size_t col) const {
  auto r = get(row);
  return r.empty() ? T(0) : r[col];
}

template <typename T>
void SparseRows<T>::clear() {
  for (auto r : rows_) slot_[r] = -1;
  rows_.clear();
  data_.clear();
}

template <typename T>
Gradients<T> Gradients<T>::zeros_like(const Params<T>& p) {
  Gradients g;
  g.item_emb = SparseRows<T>(p.n_items(), p.dim());
  g.category_emb = SparseRows<T>(p.n_categories(), p.dim());
  auto src = p.tensor_list();
  auto dst = g.dense_list();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (dst[i]) *dst[i] = Matrix<T>(src[i]->rows(), src[i]->cols());
  }
  return g;
}

template <typename T>
void Gradients<T>::clear() {
  item_emb.clear();
  category_emb.clear();
  for (auto* m : dense_list()) {
    if (m) m->fill(T(0));
  }
}

template <typename T>
std::vector<Matrix<T>*> Gradients<T>::dense_list() {
  return {nullptr,   nullptr,   &event_emb, &fuse_w2, &fuse_b2, &fuse_w1, &fuse_b1, &session_w, &session_b,
          &base_w,   &base_b,   &order_w,   &order_b, &attn_w1, &attn_w2, &attn_w3, &attn_b,  &attn_w0};
}

template <typename T>
std::vector<const Matrix<T>*> Gradients<T>::dense_list() const {
  auto v = const_cast<Gradients*>(this)->dense_list();
  return {v.begin(), v.end()};
}

template <typename T>
T Gradients<T>::at(std::size_t index, std::size_t row, std::size_t col) const {
  if (index == 0) return item_emb.at(row, col);
  if (index == 1) return category_emb.at(row, col);
  return (*dense_list().at(index))(row, col);
}

// ---------------------------------------------------------------------------
// Negative sampling

std::vector<ItemId> sample_negatives(std::size_t vocab, std::size_t n, std::span<const ItemId> exclude, Rng& rng) {
  std::vector<ItemId> excl(exclude.begin(), exclude.end());
  std::sort(excl.begin(), excl.end());
  excl.erase(std::unique(excl.begin(), excl.end()), excl.end());
  std::erase_if(excl, [&](ItemId x) { return x >= vocab; });
  const std::size_t available = vocab - excl.size();
  if (n > available) {
    throw std::invalid_argument("cannot draw " + std::to_string(n) + " negatives from " + std::to_string(available) +
                                " candidates");
  }
  auto excluded = [&](ItemId x) { return std::binary_search(excl.begin(), excl.end(), x); };

  std::vector<ItemId> out;
  out.reserve(n);
  if (2 * n <= available) {
    std::uniform_int_distribution<ItemId> pick(0, static_cast<ItemId>(vocab - 1));
    std::unordered_set<ItemId> seen;
    seen.reserve(2 * n);
    while (out.size() < n) {
      const ItemId x = pick(rng);
      if (excluded(x) || !seen.insert(x).second) continue;
      out.push_back(x);
    }
    return out;
  }
  // Dense regime: partial Fisher-Yates over the allowed ids.
  std::vector<ItemId> pool;
  pool.reserve(available);
  for (ItemId x = 0; x < vocab; ++x) {
    if (!excluded(x)) pool.push_back(x);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.push_back(pool[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forward / backward

namespace {

// Fused item vectors for every distinct item a batch touches.
template <typename T>
struct BatchFusion {
  std::unordered_map<ItemId, std::int32_t> slot_of;
  std::vector<ItemId> items;
  Matrix<T> base;  // fuse_base output per slot
  std::vector<detail::FusionTrace<T>> traces;

  std::int32_t slot(ItemId item) const { return slot_of.at(item); }
};

template <typename T>
BatchFusion<T> fuse_batch(std::span<const TrainingExample> batch, std::span<const std::vector<ItemId>> negatives,
                          const Params<T>& p, const Catalog& catalog) {
  BatchFusion<T> f;
  auto add = [&](ItemId item) {
    if (item >= p.n_items()) throw std::out_of_range("unknown item id " + std::to_string(item));
    if (f.slot_of.emplace(item, static_cast<std::int32_t>(f.items.size())).second) f.items.push_back(item);
  };
  for (std::size_t e = 0; e < batch.size(); ++e) {
    for (ItemId i : batch[e].clicks) add(i);
    for (ItemId i : batch[e].orders) add(i);
    add(batch[e].base);
    add(batch[e].target);
    for (ItemId i : negatives[e]) add(i);
  }
  const std::size_t d = p.dim();
  f.base = Matrix<T>(f.items.size(), d);
  const bool fusion = traits(p.variant).category_fusion;
  if (fusion) f.traces.resize(f.items.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::size_t s = 0; s < f.items.size(); ++s) {
    detail::fuse_base<T>(p, catalog, f.items[s], f.base.row(s), fusion ? &f.traces[s] : nullptr);
  }
  return f;
}

// Gradient contributions of one example, kept separate so examples can run
// in parallel and still be reduced in a fixed order.
template <typename T>
struct ExampleGrad {
  T loss = 0;
  std::vector<std::int32_t> slots;  // fused-vector slots with a gradient, first-touch order
  std::vector<T> d_base;            // slots.size() x d
  Matrix<T> event_emb, session_w, session_b, base_w, base_b, order_w, order_b;
  Matrix<T> attn_w1, attn_w2, attn_w3, attn_b, attn_w0;

  std::unordered_map<std::int32_t, std::size_t> local;

  void reset(std::size_t d) {
    loss = 0;
    slots.clear();
    d_base.clear();
    local.clear();
    for (auto* m : {&session_w, &base_w, &order_w, &attn_w1, &attn_w2, &attn_w3}) *m = Matrix<T>(d, d);
    for (auto* m : {&session_b, &base_b, &order_b, &attn_b, &attn_w0}) *m = Matrix<T>(1, d);
    event_emb = Matrix<T>(3, d);
  }

  std::span<T> slot_grad(std::int32_t slot, std::size_t d) {
    auto [it, fresh] = local.emplace(slot, slots.size());
    if (fresh) {
      slots.push_back(slot);
      d_base.resize(d_base.size() + d, T(0));
    }
    return {d_base.data() + it->second * d, d};
  }
};

// Routes the gradient of an event-modulated vector x = q * (1 + t_kind)
// back to q (and t_kind for fusion variants).
template <typename T>
void event_backward(const Params<T>& p, FusedKind kind, std::span<const T> q, std::span<const T> dx,
                    std::span<T> dq, Matrix<T>& d_event) {
  if (!traits(p.variant).category_fusion) {
    axpy<T>(T(1), dx, dq);
    return;
  }
  auto t = p.event_emb.row(static_cast<std::size_t>(kind));
  auto dt = d_event.row(static_cast<std::size_t>(kind));
  for (std::size_t k = 0; k < dx.size(); ++k) {
    dq[k] += dx[k] * (T(1) + t[k]);
    dt[k] += dx[k] * q[k];
  }
}

// dh -> (dW, db, dx) for h = tanh(W^T x + b).
template <typename T>
void tanh_head_backward(const Matrix<T>& w, std::span<const T> x, std::span<const T> h, std::span<const T> dh,
                        Matrix<T>& dw, Matrix<T>& db, std::span<T> dx) {
  std::vector<T> dpre(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) dpre[k] = dh[k] * (T(1) - h[k] * h[k]);
  add_outer<T>(x, dpre, dw);
  axpy<T>(T(1), dpre, db.row(0));
  add_matvec_rows<T>(w, dpre, dx);
}

template <typename T>
void example_pass(const TrainingExample& ex, std::span<const ItemId> negatives, const Params<T>& p,
                  const BatchFusion<T>& fusion, T scale, bool backward, ExampleGrad<T>& g) {
  const std::size_t d = p.dim();
  const ModelVariant variant = p.variant;

  detail::ContextTrace<T> tr;
  tr.clicks = Matrix<T>(ex.clicks.size(), d);
  for (std::size_t j = 0; j < ex.clicks.size(); ++j) {
    detail::apply_event<T>(p, FusedKind::Click, fusion.base.row(fusion.slot(ex.clicks[j])), tr.clicks.row(j));
  }
  tr.orders = Matrix<T>(ex.orders.size(), d);
  for (std::size_t j = 0; j < ex.orders.size(); ++j) {
    detail::apply_event<T>(p, FusedKind::Order, fusion.base.row(fusion.slot(ex.orders[j])), tr.orders.row(j));
  }
  tr.base.resize(d);
  detail::apply_event<T>(p, FusedKind::Candidate, fusion.base.row(fusion.slot(ex.base)), tr.base);
  detail::context_forward(p, tr);

  const auto ctx = detail::to_encoding(tr);
  const auto user = user_vector(ctx, variant);

  // Candidate 0 is the target.
  const std::size_t n_cand = negatives.size() + 1;
  auto cand_item = [&](std::size_t c) { return c == 0 ? ex.target : negatives[c - 1]; };
  Matrix<T> cand(n_cand, d);
  std::vector<T> z(n_cand);
  for (std::size_t c = 0; c < n_cand; ++c) {
    detail::apply_event<T>(p, FusedKind::Candidate, fusion.base.row(fusion.slot(cand_item(c))), cand.row(c));
    z[c] = dot<T>(user, cand.row(c));
    if (!std::isfinite(z[c])) throw TrainingError("non-finite score for item " + std::to_string(cand_item(c)));
  }
  const T zmax = *std::max_element(z.begin(), z.end());
  T sum = 0;
  for (auto v : z) sum += std::exp(v - zmax);
  g.loss = zmax + std::log(sum) - z[0];
  if (!backward) return;

  // dL/dz = softmax - onehot(target)
  std::vector<T> du(d, T(0));
  for (std::size_t c = 0; c < n_cand; ++c) {
    const T dz = scale * (std::exp(z[c] - zmax) / sum - (c == 0 ? T(1) : T(0)));
    axpy<T>(dz, cand.row(c), du);
    std::vector<T> dx(d);
    for (std::size_t k = 0; k < d; ++k) dx[k] = dz * user[k];
    const auto slot = fusion.slot(cand_item(c));
    event_backward<T>(p, FusedKind::Candidate, fusion.base.row(slot), dx, g.slot_grad(slot, d), g.event_emb);
  }

  std::vector<T> dh_s(d), dh_t(d), dh_o(d, T(0));
  if (uses_sum_score(variant)) {
    dh_s = du;
    dh_t = du;
    dh_o = du;
  } else {
    for (std::size_t k = 0; k < d; ++k) {
      dh_s[k] = du[k] * ctx.h_t[k];
      dh_t[k] = du[k] * ctx.h_s[k];
    }
  }

  std::vector<T> dx_s(d, T(0)), dx_t(d, T(0));
  tanh_head_backward<T>(p.session_w, tr.x_s, tr.h_s, dh_s, g.session_w, g.session_b, dx_s);
  tanh_head_backward<T>(p.base_w, tr.base, tr.h_t, dh_t, g.base_w, g.base_b, dx_t);

  if (traits(variant).order_head) {
    std::vector<T> dx_o(d, T(0));
    tanh_head_backward<T>(p.order_w, tr.x_o, tr.h_o, dh_o, g.order_w, g.order_b, dx_o);
    const std::size_t n_o = ex.orders.size();
    if (n_o > 0) {
      for (auto& v : dx_o) v /= static_cast<T>(n_o);
      for (std::size_t j = 0; j < n_o; ++j) {
        const auto slot = fusion.slot(ex.orders[j]);
        event_backward<T>(p, FusedKind::Order, fusion.base.row(slot), dx_o, g.slot_grad(slot, d), g.event_emb);
      }
    }
  }

  // Attention pooling.
  const std::size_t n_c = ex.clicks.size();
  if (n_c > 0) {
    Matrix<T> dclicks(n_c, d);
    std::vector<T> dmean(d, T(0));
    auto w0 = p.attn_w0.row(0);
    std::vector<T> dp(d);
    for (std::size_t j = 0; j < n_c; ++j) {
      auto xj = tr.clicks.row(j);
      auto gate = tr.attn_gate.row(j);
      const T da = dot<T>(dx_s, xj);
      axpy<T>(tr.attn_weight[j], dx_s, dclicks.row(j));
      axpy<T>(da, gate, g.attn_w0.row(0));
      for (std::size_t k = 0; k < d; ++k) dp[k] = da * w0[k] * gate[k] * (T(1) - gate[k]);
      add_outer<T>(dp, xj, g.attn_w1);
      add_matvec_cols<T>(p.attn_w1, dp, dclicks.row(j));
      add_outer<T>(dp, tr.base, g.attn_w2);
      add_matvec_cols<T>(p.attn_w2, dp, dx_t);
      add_outer<T>(dp, tr.click_mean, g.attn_w3);
      add_matvec_cols<T>(p.attn_w3, dp, dmean);
      axpy<T>(T(1), dp, g.attn_b.row(0));
    }
    for (std::size_t j = 0; j < n_c; ++j) {
      axpy<T>(T(1) / static_cast<T>(n_c), dmean, dclicks.row(j));
      const auto slot = fusion.slot(ex.clicks[j]);
      event_backward<T>(p, FusedKind::Click, fusion.base.row(slot), dclicks.row(j), g.slot_grad(slot, d),
                        g.event_emb);
    }
  }

  const auto slot = fusion.slot(ex.base);
  event_backward<T>(p, FusedKind::Candidate, fusion.base.row(slot), dx_t, g.slot_grad(slot, d), g.event_emb);
}

// Backpropagates the per-slot gradient of the fused vectors into the item,
// category and fusion-MLP parameters.
template <typename T>
void fusion_backward(const Params<T>& p, const Catalog& catalog, const BatchFusion<T>& fusion,
                     const Matrix<T>& d_base, const std::vector<char>& has_grad, Gradients<T>& out) {
  const std::size_t d = p.dim();
  const bool fused = traits(p.variant).category_fusion;
  std::vector<T> dpre1(d), dhidden(d), dpre2(d), dinput(3 * d);
  for (std::size_t s = 0; s < fusion.items.size(); ++s) {
    if (!has_grad[s]) continue;
    const ItemId item = fusion.items[s];
    auto dq = d_base.row(s);
    if (!fused) {
      axpy<T>(T(1), dq, out.item_emb.touch(item));
      continue;
    }
    const auto& tr = fusion.traces[s];
    for (std::size_t k = 0; k < d; ++k) dpre1[k] = dq[k] * detail::elu_slope(tr.pre1[k]);
    add_outer<T>(tr.hidden, dpre1, out.fuse_w1);
    axpy<T>(T(1), dpre1, out.fuse_b1.row(0));
    std::fill(dhidden.begin(), dhidden.end(), T(0));
    add_matvec_rows<T>(p.fuse_w1, dpre1, dhidden);
    for (std::size_t k = 0; k < d; ++k) dpre2[k] = dhidden[k] * detail::elu_slope(tr.pre2[k]);
    add_outer<T>(tr.input, dpre2, out.fuse_w2);
    axpy<T>(T(1), dpre2, out.fuse_b2.row(0));
    std::fill(dinput.begin(), dinput.end(), T(0));
    add_matvec_rows<T>(p.fuse_w2, dpre2, dinput);

    const CategoryId cat = catalog.category(item);
    auto m = p.item_emb.row(item);
    auto g = p.category_emb.row(cat);
    auto dm = out.item_emb.touch(item);
    auto dg = out.category_emb.touch(cat);
    for (std::size_t k = 0; k < d; ++k) {
      dm[k] += dinput[k] + dinput[d + k] * g[k];
      dg[k] += dinput[d + k] * m[k] + dinput[2 * d + k];
    }
  }
}

template <typename T>
void check_example(const TrainingExample& ex, std::span<const ItemId> negatives) {
  if (std::find(negatives.begin(), negatives.end(), ex.target) != negatives.end()) {
    throw std::invalid_argument("target appears among the negatives");
  }
}

}  // namespace

template <typename T>
T accumulate_batch(std::span<const TrainingExample> batch, std::span<const std::vector<ItemId>> negatives,
                   const Params<T>& params, const Catalog& catalog, T scale, Gradients<T>& out) {
  if (batch.size() != negatives.size()) throw std::invalid_argument("one negative list per example required");
  for (std::size_t e = 0; e < batch.size(); ++e) check_example<T>(batch[e], negatives[e]);
  const std::size_t d = params.dim();
  const auto fusion = fuse_batch(batch, negatives, params, catalog);

  std::vector<ExampleGrad<T>> per_example(batch.size());
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t e = 0; e < n; ++e) {
    per_example[e].reset(d);
    example_pass<T>(batch[e], negatives[e], params, fusion, scale, true, per_example[e]);
  }

  // Ordered reduction.
  T total = 0;
  Matrix<T> d_base(fusion.items.size(), d);
  std::vector<char> has_grad(fusion.items.size(), 0);
  for (auto& g : per_example) {
    total += g.loss;
    for (std::size_t i = 0; i < g.slots.size(); ++i) {
      const auto s = static_cast<std::size_t>(g.slots[i]);
      has_grad[s] = 1;
      axpy<T>(T(1), std::span<const T>(g.d_base.data() + i * d, d), d_base.row(s));
    }
    const std::pair<Matrix<T>*, const Matrix<T>*> dense[] = {
        {&out.event_emb, &g.event_emb}, {&out.session_w, &g.session_w}, {&out.session_b, &g.session_b},
        {&out.base_w, &g.base_w},       {&out.base_b, &g.base_b},       {&out.order_w, &g.order_w},
        {&out.order_b, &g.order_b},     {&out.attn_w1, &g.attn_w1},     {&out.attn_w2, &g.attn_w2},
        {&out.attn_w3, &g.attn_w3},     {&out.attn_b, &g.attn_b},       {&out.attn_w0, &g.attn_w0}};
    for (auto [dst, src] : dense) axpy<T>(T(1), src->flat(), dst->flat());
  }
  fusion_backward(params, catalog, fusion, d_base, has_grad, out);
  return total;
}

template <typename T>
T loss(const TrainingExample& example, std::span<const ItemId> negatives, const Params<T>& params,
       const Catalog& catalog) {
  check_example<T>(example, negatives);
  const std::vector<ItemId> neg(negatives.begin(), negatives.end());
  const auto fusion = fuse_batch<T>({&example, 1}, {&neg, 1}, params, catalog);
  ExampleGrad<T> g;
  example_pass<T>(example, negatives, params, fusion, T(1), false, g);
  return g.loss;
}

template <typename T>
Gradients<T> gradients(const TrainingExample& example, std::span<const ItemId> negatives, const Params<T>& params,
                       const Catalog& catalog) {
  auto g = Gradients<T>::zeros_like(params);
  const std::vector<ItemId> neg(negatives.begin(), negatives.end());
  accumulate_batch<T>({&example, 1}, {&neg, 1}, params, catalog, T(1), g);
  return g;
}

// ---------------------------------------------------------------------------
// Adam

template <typename T>
AdamState<T> AdamState<T>::zeros_like(const Params<T>& params) {
  AdamState s;
  params.for_each([&](const char*, const Matrix<T>& m) {
    s.first.emplace_back(m.rows(), m.cols());
    s.second.emplace_back(m.rows(), m.cols());
  });
  return s;
}

template <typename T>
void adam_step(Params<T>& params, const Gradients<T>& grads, AdamState<T>& state, double learning_rate) {
  using S = AdamState<T>;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const T b1 = static_cast<T>(S::kBeta1);
  const T b2 = static_cast<T>(S::kBeta2);
  const T c1 = static_cast<T>(1.0 / (1.0 - std::pow(S::kBeta1, t)));
  const T c2 = static_cast<T>(1.0 / (1.0 - std::pow(S::kBeta2, t)));
  const T lr = static_cast<T>(learning_rate);
  const T eps = static_cast<T>(S::kEpsilon);

  auto update = [&](T* theta, T* m, T* v, const T* g, std::size_t n) {
#pragma omp parallel for simd schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      const T gi = g ? g[i] : T(0);
      m[i] = b1 * m[i] + (T(1) - b1) * gi;
      v[i] = b2 * v[i] + (T(1) - b2) * gi * gi;
      theta[i] -= lr * (m[i] * c1) / (std::sqrt(v[i] * c2) + eps);
    }
  };

  auto tensors = params.tensor_list();
  const auto dense = grads.dense_list();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    Matrix<T>& theta = *tensors[i];
    Matrix<T>& m = state.first[i];
    Matrix<T>& v = state.second[i];
    if (dense[i]) {
      update(theta.data(), m.data(), v.data(), dense[i]->data(), theta.size());
      continue;
    }
    const SparseRows<T>& sparse = i == 0 ? grads.item_emb : grads.category_emb;
    const std::size_t d = theta.cols();
    for (std::size_t r = 0; r < theta.rows(); ++r) {
      auto g = sparse.get(r);
      update(theta.row(r).data(), m.row(r).data(), v.row(r).data(), g.empty() ? nullptr : g.data(), d);
    }
  }
}

// ---------------------------------------------------------------------------
// Training loop

TrainResult train(std::span<const TrainingExample> dataset, const Catalog& catalog, const TrainConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  if (dataset.empty()) throw std::invalid_argument("training dataset is empty");
  config.validate(catalog.size());

  TrainResult result;
  result.params = init_params(catalog, config.variant, config.dim, config.init_mode(), config.seed);
  ModelParams& params = result.params;
  auto state = AdamState<float>::zeros_like(params);
  auto grads = Gradients<float>::zeros_like(params);
  Rng shuffle_rng = make_rng(config.seed, "shuffle");
  Rng negative_rng = make_rng(config.seed, "negatives");

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<TrainingExample> batch;
  std::vector<std::vector<ItemId>> negatives;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      batch.clear();
      negatives.clear();
      for (std::size_t i = begin; i < end; ++i) {
        const auto& ex = dataset[order[i]];
        batch.push_back(ex);
        const ItemId exclude[] = {ex.target, ex.base};
        negatives.push_back(sample_negatives(catalog.size(), config.negatives, exclude, negative_rng));
      }
      grads.clear();
      const float batch_loss = accumulate_batch<float>(batch, negatives, params, catalog,
                                                       1.0f / static_cast<float>(batch.size()), grads);
      if (!std::isfinite(batch_loss)) {
        throw TrainingError("non-finite loss in epoch " + std::to_string(epoch) + " at example offset " +
                            std::to_string(begin));
      }
      epoch_loss += batch_loss;
      adam_step(params, grads, state, config.learning_rate);
    }
    EpochLog log;
    log.epoch = epoch;
    log.mean_loss = epoch_loss / static_cast<double>(dataset.size());
    log.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  return result;
}

#define ZSFC_INSTANTIATE(T)                                                                                     \
  template class SparseRows<T>;                                                                                 \
  template struct Gradients<T>;                                                                                 \
  template struct AdamState<T>;                                                                                 \
  template T loss<T>(const TrainingExample&, std::span<const ItemId>, const Params<T>&, const Catalog&);        \
  template Gradients<T> gradients<T>(const TrainingExample&, std::span<const ItemId>, const Params<T>&,         \
                                     const Catalog&);                                                           \
  template T accumulate_batch<T>(std::span<const TrainingExample>, std::span<const std::vector<ItemId>>,        \
                                 const Params<T>&, const Catalog&, T, Gradients<T>&);                           \
  template void adam_step<T>(Params<T>&, const Gradients<T>&, AdamState<T>&, double);

ZSFC_INSTANTIATE(float)
ZSFC_INSTANTIATE(double)
ZSFC_INSTANTIATE(long double)

}  // namespace zsfc
