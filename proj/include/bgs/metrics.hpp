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
#include "bgs/linalg.hpp"
#include "bgs/muscles.hpp"
#include "bgs/skeletons.hpp"

#include <optional>

namespace bgs {

/// ||I - Q^T Q||_2; NaN when Q has a non-finite entry.
double loo(ConstMatView q);
/// ||X - Q R||_2 / ||X||_2; NaN on non-finite input.
double rel_res(ConstMatView x, ConstMatView q, const UpperTriangular &r);
/// ||X^T X - R^T R||_2 / ||X||_2^2; NaN on non-finite input.
double rel_chol_res(ConstMatView x, const UpperTriangular &r);

struct StabilityReport {
  double loo = 0.0;
  double rel_res = 0.0;
  double rel_chol_res = 0.0;
  double kappa = 1.0; // NaN for numerically singular X
};

StabilityReport stability_report(const BlockMatrix &x, const BGSResult &result);

/// Tolerance constant hiding the dimensional factors of the O(eps) bounds.
inline constexpr double kBoundConstant = 100.0;

/// Theoretical LOO envelope for one skeleton/IO combination.
///
///   BCGSI+A      theta = max(alpha_1, 1)      LOO = O(eps)              needs alpha_A = 0
///   BCGSI+A-3S   theta = max(alpha + 1, 2)    LOO = O(eps) kappa^max(alpha, 1)   alpha_A <= alpha
///   BCGSI+A-2S   theta = 3                    LOO = O(eps) kappa^2      alpha_A <= 2
///   BCGSI+A-1S   theta = 3                    LOO = O(eps) kappa^2      alpha_A <= 2
///   BCGS(-A)     theta = 1                    LOO = O(eps) kappa^(max(alpha_A + 1, alpha) + p - 2)
///
/// The BCGS(-A) exponent (p-1, p or p+1 for the usual IO pairs) is a
/// diagnostic only: `gated` is false and it never counts as a violation.
/// BCGSI+ with a non-Householder-class first block falls outside the
/// BCGSI+A bound and is likewise ungated.
struct BoundSpec {
  SkeletonKind skeleton = SkeletonKind::BCGSI_PLUS_A;
  int alpha_a = 0;
  int alpha1 = 0;
  int alpha2 = 0;
  int theta = 1;
  int loo_exponent = 0;
  bool gated = true;
};

/// `io1` is the loop IO for BCGS-A and 3S; `io2` only matters for BCGSI+A.
/// `p` is needed for the BCGS(-A) diagnostic exponent.
BoundSpec bound_spec(SkeletonKind skeleton, IOKind io_a, std::optional<IOKind> io1 = std::nullopt,
                     std::optional<IOKind> io2 = std::nullopt, std::size_t p = 1);

struct Envelope {
  /// eps * kappa^theta <= 1/2 and the spec is gated.
  bool applicable = false;
  /// kBoundConstant * eps * kappa^loo_exponent.
  double loo_bound = 0.0;
};

Envelope bound_envelope(const BoundSpec &spec, double kappa, double eps = unit_roundoff);

} // namespace bgs
