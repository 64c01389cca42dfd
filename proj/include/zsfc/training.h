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
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/model.h"
#include "zsfc/rng.h"
#include "zsfc/sampler.h"

namespace zsfc {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  ModelVariant variant = ModelVariant::Zsfc;
  std::size_t dim = 128;
  double learning_rate = 5e-4;
  std::size_t epochs = 5;
  std::size_t negatives = 2048;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  /// Defaults to Image for variants with image initialisation, else Xavier.
  std::optional<InitMode> init;

  InitMode init_mode() const;
  void validate(std::size_t vocab) const;
};

/// Gradient rows for an embedding table; only rows an example touched are stored.
template <typename T>
class SparseRows {
 public:
  SparseRows() = default;
  SparseRows(std::size_t n_rows, std::size_t dim) : dim_(dim), slot_(n_rows, -1) {}

  std::size_t n_rows() const { return slot_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const ItemId> touched() const { return rows_; }
  bool contains(std::size_t row) const { return slot_[row] >= 0; }

  /// Row `r`, created as zeros on first touch.
  std::span<T> touch(std::size_t row);
  /// Row `r` or an empty span when untouched.
  std::span<const T> get(std::size_t row) const;
  T at(std::size_t row, std::size_t col) const;
  void clear();

 private:
  std::size_t dim_ = 0;
  std::vector<std::int32_t> slot_;
  std::vector<ItemId> rows_;
  std::vector<T> data_;
};

/// Parameter-shaped gradient bundle; sparse over item and category tables.
template <typename T>
struct Gradients {
  SparseRows<T> item_emb;
  SparseRows<T> category_emb;
  Matrix<T> event_emb, fuse_w2, fuse_b2, fuse_w1, fuse_b1;
  Matrix<T> session_w, session_b, base_w, base_b, order_w, order_b;
  Matrix<T> attn_w1, attn_w2, attn_w3, attn_b, attn_w0;

  static Gradients zeros_like(const Params<T>& params);
  void clear();

  /// Dense tensors in Params::for_each order; nullptr for the two sparse tables.
  std::vector<Matrix<T>*> dense_list();
  std::vector<const Matrix<T>*> dense_list() const;

  /// Gradient entry of tensor `index` (Params::for_each order).
  T at(std::size_t index, std::size_t row, std::size_t col) const;
};

/// `n` distinct ids drawn uniformly from [0, vocab) \ exclude.
std::vector<ItemId> sample_negatives(std::size_t vocab, std::size_t n, std::span<const ItemId> exclude, Rng& rng);

/// Sampled-softmax cross-entropy of the target against `negatives`,
/// computed with max subtraction. Throws TrainingError on a non-finite score.
template <typename T>
T loss(const TrainingExample& example, std::span<const ItemId> negatives, const Params<T>& params,
       const Catalog& catalog);

/// Exact gradient of loss() with respect to every parameter.
template <typename T>
Gradients<T> gradients(const TrainingExample& example, std::span<const ItemId> negatives, const Params<T>& params,
                       const Catalog& catalog);

/// Adds scale * d(sum of example losses)/d(params) into `out` and returns
/// the unscaled loss sum. Item fusion runs once per distinct item in the
/// batch; per-example work fans out over OpenMP threads and is reduced in
/// example order, so the result does not depend on the thread count.
template <typename T>
T accumulate_batch(std::span<const TrainingExample> batch, std::span<const std::vector<ItemId>> negatives,
                   const Params<T>& params, const Catalog& catalog, T scale, Gradients<T>& out);

template <typename T>
struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  std::vector<Matrix<T>> first;   // per tensor, Params::for_each order
  std::vector<Matrix<T>> second;
  std::uint64_t step = 0;

  static AdamState zeros_like(const Params<T>& params);
};

/// One bias-corrected Adam update over all parameters (dense: rows without
/// gradient still decay their moments).
template <typename T>
void adam_step(Params<T>& params, const Gradients<T>& grads, AdamState<T>& state, double learning_rate);

struct EpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double wall_ms = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> log;
};

/// Seeded shuffling per epoch, per-example negatives excluding {target, base},
/// mean minibatch loss, Adam. Deterministic for a fixed seed.
TrainResult train(std::span<const TrainingExample> dataset, const Catalog& catalog, const TrainConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace zsfc
