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

#include "bgs/kernels.hpp"

#include <cstdint>

namespace bgs::kernels {

namespace {

void check_tn(ConstMatView a, ConstMatView b, MatView c) {
  if (a.rows != b.rows || c.rows != a.cols || c.cols != b.cols)
    throw Error("gemm_tn: dimension mismatch");
}

void check_nn(ConstMatView a, ConstMatView b, MatView c) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols)
    throw Error("gemm_nn: dimension mismatch");
}

// Shared per-entry bodies: both flavours call exactly these.
inline double dot_column(const double *x, const double *y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += x[i] * y[i];
  return acc;
}

// Rows [r0, r1) of C -= A B, axpy order over the inner index.
inline void sub_rows(ConstMatView a, ConstMatView b, MatView c, std::size_t r0, std::size_t r1) {
  for (std::size_t j = 0; j < c.cols; ++j) {
    double *cj = c.col(j);
    for (std::size_t l = 0; l < a.cols; ++l) {
      const double blj = b(l, j);
      const double *al = a.col(l);
      for (std::size_t i = r0; i < r1; ++i)
        cj[i] -= al[i] * blj;
    }
  }
}

inline void mul_rows(ConstMatView a, ConstMatView b, MatView c, std::size_t r0, std::size_t r1) {
  for (std::size_t j = 0; j < c.cols; ++j) {
    double *cj = c.col(j);
    for (std::size_t i = r0; i < r1; ++i)
      cj[i] = 0.0;
    for (std::size_t l = 0; l < a.cols; ++l) {
      const double blj = b(l, j);
      const double *al = a.col(l);
      for (std::size_t i = r0; i < r1; ++i)
        cj[i] += al[i] * blj;
    }
  }
}

constexpr std::size_t kRowChunk = 64;
// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = std::size_t{1} << 15;

} // namespace

namespace serial {

void gemm_tn(ConstMatView a, ConstMatView b, MatView c) {
  check_tn(a, b, c);
  for (std::size_t j = 0; j < b.cols; ++j)
    for (std::size_t i = 0; i < a.cols; ++i)
      c(i, j) = dot_column(a.col(i), b.col(j), a.rows);
}

void gemm_nn_sub(ConstMatView a, ConstMatView b, MatView c) {
  check_nn(a, b, c);
  sub_rows(a, b, c, 0, c.rows);
}

void gemm_nn(ConstMatView a, ConstMatView b, MatView c) {
  check_nn(a, b, c);
  mul_rows(a, b, c, 0, c.rows);
}

} // namespace serial

namespace omp {

void gemm_tn(ConstMatView a, ConstMatView b, MatView c) {
  check_tn(a, b, c);
  const auto entries = static_cast<std::int64_t>(a.cols * b.cols);
#pragma omp parallel for schedule(static)
  for (std::int64_t e = 0; e < entries; ++e) {
    const auto i = static_cast<std::size_t>(e) % a.cols;
    const auto j = static_cast<std::size_t>(e) / a.cols;
    c(i, j) = dot_column(a.col(i), b.col(j), a.rows);
  }
}

void gemm_nn_sub(ConstMatView a, ConstMatView b, MatView c) {
  check_nn(a, b, c);
  const auto chunks = static_cast<std::int64_t>((c.rows + kRowChunk - 1) / kRowChunk);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < chunks; ++t) {
    const std::size_t r0 = static_cast<std::size_t>(t) * kRowChunk;
    const std::size_t r1 = r0 + kRowChunk < c.rows ? r0 + kRowChunk : c.rows;
    sub_rows(a, b, c, r0, r1);
  }
}

void gemm_nn(ConstMatView a, ConstMatView b, MatView c) {
  check_nn(a, b, c);
  const auto chunks = static_cast<std::int64_t>((c.rows + kRowChunk - 1) / kRowChunk);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < chunks; ++t) {
    const std::size_t r0 = static_cast<std::size_t>(t) * kRowChunk;
    const std::size_t r1 = r0 + kRowChunk < c.rows ? r0 + kRowChunk : c.rows;
    mul_rows(a, b, c, r0, r1);
  }
}

} // namespace omp

bool parallel_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

DenseMatrix inner(ConstMatView a, ConstMatView b) {
  DenseMatrix c(a.cols, b.cols);
  if (parallel_enabled() && a.rows * a.cols * b.cols >= kParallelWork)
    omp::gemm_tn(a, b, c.view());
  else
    serial::gemm_tn(a, b, c.view());
  return c;
}

void subtract_product(MatView c, ConstMatView a, ConstMatView b) {
  if (parallel_enabled() && c.rows * c.cols * a.cols >= kParallelWork)
    omp::gemm_nn_sub(a, b, c);
  else
    serial::gemm_nn_sub(a, b, c);
}

DenseMatrix product(ConstMatView a, ConstMatView b) {
  DenseMatrix c(a.rows, b.cols);
  if (parallel_enabled() && a.rows * a.cols * b.cols >= kParallelWork)
    omp::gemm_nn(a, b, c.view());
  else
    serial::gemm_nn(a, b, c.view());
  return c;
}

} // namespace bgs::kernels
