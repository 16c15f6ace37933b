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

#include "bgs/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bgs {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(ConstMatView v) : rows_(v.rows), cols_(v.cols), data_(v.rows * v.cols) {
  for (std::size_t j = 0; j < cols_; ++j)
    std::copy_n(v.col(j), rows_, data_.data() + j * rows_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  DenseMatrix m(r, c);
  std::size_t i = 0;
  for (const auto &row : rows) {
    if (row.size() != c)
      throw Error("ragged row literal");
    std::size_t j = 0;
    for (double v : row)
      m(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::from_column_major(std::size_t rows, std::size_t cols, std::vector<double> data) {
  if (data.size() != rows * cols)
    throw Error("payload length does not match dimensions");
  DenseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i)
      t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
  if (i0 + r > rows_ || j0 + c > cols_)
    throw Error("block out of range");
  return DenseMatrix(view().sub(i0, j0, r, c));
}

void DenseMatrix::set_block(std::size_t i0, std::size_t j0, ConstMatView src) {
  if (i0 + src.rows > rows_ || j0 + src.cols > cols_)
    throw Error("block out of range");
  for (std::size_t j = 0; j < src.cols; ++j)
    std::copy_n(src.col(j), src.rows, data_.data() + i0 + (j0 + j) * rows_);
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool DenseMatrix::any_nan() const {
  return std::any_of(data_.begin(), data_.end(), [](double v) { return std::isnan(v); });
}

namespace {
void require_same_shape(const DenseMatrix &a, const DenseMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("dimension mismatch");
}
} // namespace

DenseMatrix operator+(const DenseMatrix &a, const DenseMatrix &b) {
  require_same_shape(a, b);
  DenseMatrix c = a;
  for (std::size_t k = 0; k < c.size(); ++k)
    c.data()[k] += b.data()[k];
  return c;
}

DenseMatrix operator-(const DenseMatrix &a, const DenseMatrix &b) {
  require_same_shape(a, b);
  DenseMatrix c = a;
  for (std::size_t k = 0; k < c.size(); ++k)
    c.data()[k] -= b.data()[k];
  return c;
}

DenseMatrix operator*(double alpha, const DenseMatrix &a) {
  DenseMatrix c = a;
  for (std::size_t k = 0; k < c.size(); ++k)
    c.data()[k] *= alpha;
  return c;
}

DenseMatrix nan_matrix(std::size_t rows, std::size_t cols) {
  return DenseMatrix(rows, cols, std::numeric_limits<double>::quiet_NaN());
}

UpperTriangular::UpperTriangular(DenseMatrix data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols())
    throw Error("triangular factor must be square");
  for (std::size_t j = 0; j < data_.cols(); ++j)
    for (std::size_t i = j + 1; i < data_.rows(); ++i)
      if (data_(i, j) != 0.0)
        throw Error("matrix is not upper triangular");
}

UpperTriangular UpperTriangular::upper_part(const DenseMatrix &m) {
  if (m.rows() != m.cols())
    throw Error("triangular factor must be square");
  DenseMatrix u = m;
  for (std::size_t j = 0; j < u.cols(); ++j)
    for (std::size_t i = j + 1; i < u.rows(); ++i)
      u(i, j) = 0.0;
  return UpperTriangular(std::move(u));
}

void UpperTriangular::set(std::size_t i, std::size_t j, double v) {
  if (i > j)
    throw Error("write below the diagonal of an upper-triangular factor");
  data_(i, j) = v;
}

BlockMatrix::BlockMatrix(DenseMatrix data, std::size_t block_width) : data_(std::move(data)), width_(block_width) {
  if (width_ == 0)
    throw Error("block width must be positive");
  if (data_.cols() == 0 || data_.cols() % width_ != 0)
    throw Error("column count is not a positive multiple of the block width");
  count_ = data_.cols() / width_;
  if (data_.rows() < data_.cols())
    throw Error("block matrix must be tall (rows >= p*s)");
}

} // namespace bgs
