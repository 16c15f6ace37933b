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

#include <vector>

namespace bgs {

/// Unit roundoff of IEEE binary64, 2^-53.
inline constexpr double unit_roundoff = 0x1p-53;

/// All min(rows, cols) singular values in descending order.
///
/// Householder bidiagonalization followed by Golub-Kahan implicit-shift QR
/// sweeps on the bidiagonal.  Off-diagonals below 1e-15 * ||B|| are deflated;
/// at most 100 * min(rows, cols) sweeps are attempted before giving up.
/// Throws "non-finite matrix" on NaN/Inf input.
std::vector<double> singular_values(ConstMatView a);

double spectral_norm(ConstMatView a);
double sigma_min(ConstMatView a);
/// 2-norm condition number; throws "singular matrix, kappa undefined" when
/// the smallest singular value is zero.
double cond_2(ConstMatView a);

/// Solves R^T Z = B by forward substitution.
DenseMatrix tri_solve_left_transposed(const UpperTriangular &r, ConstMatView b);
/// Solves Z R = B by substitution over the columns of Z.
DenseMatrix tri_solve_right(ConstMatView b, const UpperTriangular &r);

} // namespace bgs
