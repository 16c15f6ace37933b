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

// Shared helpers for the unit tests.  Oracles here go through Eigen or plain
// loops so that they do not share code with the library under test.

#include "bgs/dense.hpp"
#include "bgs/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

namespace bgs::test {

inline constexpr double kEps = 0x1p-53;
inline constexpr double kC = 100.0;

inline Eigen::MatrixXd to_eigen(ConstMatView a) {
  Eigen::MatrixXd out(a.rows, a.cols);
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i)
      out(i, j) = a(i, j);
  return out;
}

inline DenseMatrix from_eigen(const Eigen::MatrixXd &a) {
  DenseMatrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out(i, j) = a(i, j);
  return out;
}

/// Standard normal entries from a private stream.
inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  CounterRng rng(seed, 0xfeed);
  DenseMatrix a(rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k)
    a.data()[k] = rng.normal();
  return a;
}

inline Eigen::VectorXd eigen_singular_values(ConstMatView a) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(a)).singularValues();
}

inline double oracle_norm2(ConstMatView a) { return eigen_singular_values(a)(0); }

inline double oracle_cond(ConstMatView a) {
  const Eigen::VectorXd sv = eigen_singular_values(a);
  return sv(0) / sv(sv.size() - 1);
}

inline double oracle_loo(ConstMatView q) {
  const Eigen::MatrixXd e = to_eigen(q);
  const Eigen::MatrixXd d = Eigen::MatrixXd::Identity(e.cols(), e.cols()) - e.transpose() * e;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(d).singularValues()(0);
}

inline double oracle_rel_res(ConstMatView x, ConstMatView q, ConstMatView r) {
  const Eigen::MatrixXd ex = to_eigen(x);
  const Eigen::MatrixXd d = ex - to_eigen(q) * to_eigen(r);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(d).singularValues()(0) / oracle_norm2(x);
}

inline double frobenius(ConstMatView a) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i)
      s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

inline double max_abs_diff(ConstMatView a, ConstMatView b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// Eigen Householder QR with the diag(R) >= 0 convention.
inline DenseMatrix oracle_r_factor(ConstMatView x) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(to_eigen(x));
  const Eigen::Index n = static_cast<Eigen::Index>(x.cols);
  Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i)
    if (r(i, i) < 0)
      r.row(i) *= -1.0;
  return from_eigen(r);
}

/// Matrix with singular values log-spaced from 1 to 1/kappa, built with
/// Eigen's QR so it is independent of the library generator.
inline DenseMatrix oracle_conditioned(std::size_t rows, std::size_t cols, double kappa, std::uint64_t seed) {
  const Eigen::MatrixXd g1 = to_eigen(random_matrix(rows, cols, seed));
  const Eigen::MatrixXd g2 = to_eigen(random_matrix(cols, cols, seed + 7));
  const Eigen::MatrixXd u = Eigen::HouseholderQR<Eigen::MatrixXd>(g1).householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  const Eigen::MatrixXd v = Eigen::HouseholderQR<Eigen::MatrixXd>(g2).householderQ();
  Eigen::VectorXd sigma(cols);
  for (std::size_t j = 0; j < cols; ++j)
    sigma(j) = cols == 1 ? 1.0 : std::pow(kappa, -static_cast<double>(j) / static_cast<double>(cols - 1));
  return from_eigen(u * sigma.asDiagonal() * v.transpose());
}

} // namespace bgs::test
