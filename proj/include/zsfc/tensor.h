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

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace zsfc {

/// Row-major dense matrix. Vectors are stored as 1 x n matrices.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  template <typename U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    std::transform(data_.begin(), data_.end(), out.data(), [](T v) { return static_cast<U>(v); });
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
inline T dot(std::span<const T> a, std::span<const T> b) {
  assert(a.size() == b.size());
  T acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// out[k] = sum_j w(j, k) * x[j] + bias[k]   (w is in x out, i.e. W^T x)
template <typename T>
inline void affine_t(const Matrix<T>& w, std::span<const T> x, std::span<const T> bias, std::span<T> out) {
  assert(w.rows() == x.size() && w.cols() == out.size());
  std::copy(bias.begin(), bias.end(), out.begin());
  for (std::size_t j = 0; j < w.rows(); ++j) {
    const T xj = x[j];
    if (xj == T(0)) continue;
    const T* wr = w.row(j).data();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += wr[k] * xj;
  }
}

// out[k] += sum_j w(k, j) * x[j]   (W x, w is out x in)
template <typename T>
inline void add_matvec(const Matrix<T>& w, std::span<const T> x, std::span<T> out) {
  assert(w.cols() == x.size() && w.rows() == out.size());
  for (std::size_t k = 0; k < w.rows(); ++k) out[k] += dot<T>(w.row(k), x);
}

// out[j] += sum_k w(j, k) * y[k]   (backward of affine_t w.r.t. its input)
template <typename T>
inline void add_matvec_rows(const Matrix<T>& w, std::span<const T> y, std::span<T> out) {
  assert(w.cols() == y.size() && w.rows() == out.size());
  for (std::size_t j = 0; j < w.rows(); ++j) out[j] += dot<T>(w.row(j), y);
}

// out[j] += sum_k w(k, j) * y[k]   (backward of add_matvec w.r.t. its input)
template <typename T>
inline void add_matvec_cols(const Matrix<T>& w, std::span<const T> y, std::span<T> out) {
  assert(w.rows() == y.size() && w.cols() == out.size());
  for (std::size_t k = 0; k < w.rows(); ++k) {
    const T yk = y[k];
    if (yk == T(0)) continue;
    const T* wr = w.row(k).data();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += wr[j] * yk;
  }
}

// g(i, j) += a[i] * b[j]
template <typename T>
inline void add_outer(std::span<const T> a, std::span<const T> b, Matrix<T>& g) {
  assert(g.rows() == a.size() && g.cols() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const T ai = a[i];
    if (ai == T(0)) continue;
    T* gr = g.row(i).data();
    for (std::size_t j = 0; j < b.size(); ++j) gr[j] += ai * b[j];
  }
}

template <typename T>
inline void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace zsfc
