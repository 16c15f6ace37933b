/*
 * Copyright (C) 2026 The lowsync-bgs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgs {

/// Raised for violated preconditions and numerical breakdowns that the
/// library reports by exception (everything except Cholesky failure, which
/// is carried as a flag on the result).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-owning read-only view of a column-major matrix with leading dimension.
struct ConstMatView {
  const double *ptr = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t ld = 0;

  double operator()(std::size_t i, std::size_t j) const { return ptr[i + j * ld]; }
  const double *col(std::size_t j) const { return ptr + j * ld; }

  /// Columns [j0, j0 + n).
  ConstMatView col_range(std::size_t j0, std::size_t n) const {
    return {ptr + j0 * ld, rows, n, ld};
  }
  ConstMatView sub(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
    return {ptr + i0 + j0 * ld, r, c, ld};
  }
};

struct MatView {
  double *ptr = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t ld = 0;

  double &operator()(std::size_t i, std::size_t j) const { return ptr[i + j * ld]; }
  double *col(std::size_t j) const { return ptr + j * ld; }

  MatView col_range(std::size_t j0, std::size_t n) const { return {ptr + j0 * ld, rows, n, ld}; }
  MatView sub(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
    return {ptr + i0 + j0 * ld, r, c, ld};
  }
  operator ConstMatView() const { return {ptr, rows, cols, ld}; }
};

/// Owning dense real matrix, column-major, binary64.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Copies a (possibly strided) view.
  explicit DenseMatrix(ConstMatView v);

  static DenseMatrix identity(std::size_t n);
  /// Row-major literal, convenient for small hand-written cases.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Column-major payload; throws if the length does not match.
  static DenseMatrix from_column_major(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double &operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

  double *data() { return data_.data(); }
  const double *data() const { return data_.data(); }
  const std::vector<double> &storage() const { return data_; }

  ConstMatView view() const { return {data_.data(), rows_, cols_, rows_}; }
  MatView view() { return {data_.data(), rows_, cols_, rows_}; }
  operator ConstMatView() const { return view(); }

  DenseMatrix transpose() const;
  /// Copy of rows [i0, i0+r) x cols [j0, j0+c).
  DenseMatrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;
  void set_block(std::size_t i0, std::size_t j0, ConstMatView src);

  bool all_finite() const;
  bool any_nan() const;

  friend bool operator==(const DenseMatrix &a, const DenseMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix &a, const DenseMatrix &b);
DenseMatrix operator-(const DenseMatrix &a, const DenseMatrix &b);
DenseMatrix operator*(double alpha, const DenseMatrix &a);

/// Matrix filled with quiet NaN, the data state of a failed computation.
DenseMatrix nan_matrix(std::size_t rows, std::size_t cols);

/// Square upper-triangular factor. Entries strictly below the diagonal are
/// exactly zero; the constructor rejects anything else.
class UpperTriangular {
public:
  UpperTriangular() = default;
  explicit UpperTriangular(std::size_t order) : data_(order, order) {}
  explicit UpperTriangular(DenseMatrix data);

  static UpperTriangular identity(std::size_t n) { return UpperTriangular(DenseMatrix::identity(n)); }
  /// Keeps the upper triangle of `m`, discarding the rest.
  static UpperTriangular upper_part(const DenseMatrix &m);

  std::size_t order() const { return data_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return data_(i, j); }
  /// Writes are only allowed on or above the diagonal.
  void set(std::size_t i, std::size_t j, double v);

  const DenseMatrix &dense() const { return data_; }
  operator ConstMatView() const { return data_.view(); }

  friend bool operator==(const UpperTriangular &a, const UpperTriangular &b) { return a.data_ == b.data_; }

private:
  DenseMatrix data_;
};

/// m x (p*s) matrix partitioned into p block vectors of width s.
/// Blocks are addressed 0-based: block(k) holds columns [k*s, (k+1)*s).
class BlockMatrix {
public:
  BlockMatrix() = default;
  BlockMatrix(DenseMatrix data, std::size_t block_width);

  std::size_t rows() const { return data_.rows(); }
  std::size_t cols() const { return data_.cols(); }
  std::size_t block_width() const { return width_; }
  std::size_t block_count() const { return count_; }

  const DenseMatrix &data() const { return data_; }
  DenseMatrix &data() { return data_; }

  ConstMatView block(std::size_t k) const { return data_.view().col_range(k * width_, width_); }
  MatView block(std::size_t k) { return data_.view().col_range(k * width_, width_); }
  /// The first `k` blocks, i.e. columns [0, k*s).
  ConstMatView leading(std::size_t k) const { return data_.view().col_range(0, k * width_); }

private:
  DenseMatrix data_;
  std::size_t width_ = 0;
  std::size_t count_ = 0;
};

} // namespace bgs
