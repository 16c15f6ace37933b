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

#include "bgs/dense.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

/** @file Seeded test matrices with controllable conditioning.

    monomial  r Krylov panels [v, A v, ..., A^{t-1} v] with A = diag of m
              points evenly spaced on [0.1, 10] and v uniform on [-1, 1]^m
              scaled to unit norm.  r t = p s; kappa grows with t.
    piled     X_1 with condition number kappa_x1, then X_k = X_{k-1} + Z_k
              where every Z_k = z_scale * (matrix with condition number
              kappa_z and unit 2-norm).  z_scale is the knob that drives the
              overall conditioning; see calibrate_piled.
    default   U diag(sigma) V^T with random orthonormal U (m x ps), V
              (ps x ps) and sigma log-spaced from 1 down to 1/kappa.

    All randomness comes from CounterRng substreams of the spec's seed, so
    identical specs give bit-identical matrices.
 */

namespace bgs {

enum class MatrixClass : std::uint8_t { Monomial, Piled, Default };

std::string_view matrix_class_name(MatrixClass cls);
std::optional<MatrixClass> parse_matrix_class(std::string_view text);

struct MatrixClassSpec {
  MatrixClass cls = MatrixClass::Default;
  std::size_t m = 100;
  std::size_t p = 10;
  std::size_t s = 5;
  std::uint64_t seed = 42;

  // monomial: r * t == p * s
  std::size_t r = 0;
  std::size_t t = 0;

  // piled
  double kappa_x1 = 10.0;
  double kappa_z = 10.0;
  double z_scale = 1.0;

  // default
  double kappa = 1.0;
};

/// Matrix with log-spaced singular values 1 ... 1/kappa (rows >= cols).
DenseMatrix svd_with_cond(std::size_t rows, std::size_t cols, double kappa, std::uint64_t seed);

BlockMatrix gen_monomial(const MatrixClassSpec &spec);
BlockMatrix gen_piled(const MatrixClassSpec &spec);
BlockMatrix gen_default(const MatrixClassSpec &spec);
/// Dispatches on spec.cls.
BlockMatrix generate(const MatrixClassSpec &spec);

/// Divisors of n in increasing order: the admissible panel lengths t for a
/// monomial matrix with p s = n (r = n / t).
std::vector<std::size_t> divisors(std::size_t n);

struct PiledCalibration {
  double z_scale = 1.0;
  double kappa_actual = 0.0;
  /// Achieved kappa within a factor 2 of the target.
  bool converged = false;
};

/// Bisects log10(z_scale) on [-18, 2] until cond_2 of the piled matrix is
/// within 5% of `target` (or 80 halvings).  Other fields of `spec` are kept.
PiledCalibration calibrate_piled(const MatrixClassSpec &spec, double target);

/// Panel length t (a divisor of p s) whose monomial matrix has cond_2
/// closest to `target` in log scale.
std::size_t monomial_t_for_kappa(const MatrixClassSpec &spec, double target);

} // namespace bgs
