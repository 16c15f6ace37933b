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

#include "bgs/metrics.hpp"

#include "bgs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bgs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite(ConstMatView a) {
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i)
      if (!std::isfinite(a(i, j)))
        return false;
  return true;
}

} // namespace

double loo(ConstMatView q) {
  if (!finite(q))
    return kNaN;
  DenseMatrix e = kernels::inner(q, q);
  for (std::size_t j = 0; j < e.cols(); ++j)
    for (std::size_t i = 0; i < e.rows(); ++i)
      e(i, j) = (i == j ? 1.0 : 0.0) - e(i, j);
  return spectral_norm(e);
}

double rel_res(ConstMatView x, ConstMatView q, const UpperTriangular &r) {
  if (!finite(x) || !finite(q) || !finite(r))
    return kNaN;
  DenseMatrix diff(x);
  kernels::subtract_product(diff.view(), q, r);
  return spectral_norm(diff) / spectral_norm(x);
}

double rel_chol_res(ConstMatView x, const UpperTriangular &r) {
  if (!finite(x) || !finite(r))
    return kNaN;
  const DenseMatrix gram = kernels::inner(x, x);
  const DenseMatrix rtr = kernels::inner(r, r);
  const double nx = spectral_norm(x);
  return spectral_norm(gram - rtr) / (nx * nx);
}

StabilityReport stability_report(const BlockMatrix &x, const BGSResult &result) {
  StabilityReport rep;
  rep.loo = loo(result.q.data());
  rep.rel_res = rel_res(x.data(), result.q.data(), result.r);
  rep.rel_chol_res = rel_chol_res(x.data(), result.r);
  try {
    rep.kappa = cond_2(x.data());
  } catch (const Error &) {
    rep.kappa = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

BoundSpec bound_spec(SkeletonKind skeleton, IOKind io_a, std::optional<IOKind> io1, std::optional<IOKind> io2,
                     std::size_t p) {
  auto alpha = [](IOKind k) { return IOSpec{k}.alpha(); };
  BoundSpec b;
  b.skeleton = skeleton;
  b.alpha_a = alpha(io_a);
  b.alpha1 = io1 ? alpha(*io1) : b.alpha_a;
  b.alpha2 = io2 ? alpha(*io2) : b.alpha1;
  const int pp = static_cast<int>(p);
  switch (skeleton) {
  case SkeletonKind::BCGS:
    b.alpha1 = b.alpha_a;
    b.alpha2 = b.alpha_a;
    [[fallthrough]];
  case SkeletonKind::BCGS_A:
    b.theta = 1;
    b.loo_exponent = std::max(b.alpha_a + 1, b.alpha1) + pp - 2;
    b.gated = false;
    break;
  case SkeletonKind::BCGSI_PLUS:
    b.alpha1 = b.alpha_a;
    b.alpha2 = b.alpha_a;
    [[fallthrough]];
  case SkeletonKind::BCGSI_PLUS_A:
    b.theta = std::max(b.alpha1, 1);
    b.loo_exponent = 0;
    b.gated = b.alpha_a == 0;
    break;
  case SkeletonKind::BCGSI_A_3S:
    b.theta = std::max(b.alpha1 + 1, 2);
    b.loo_exponent = std::max(b.alpha1, 1);
    b.gated = b.alpha_a <= b.alpha1;
    break;
  case SkeletonKind::BCGSI_A_2S:
  case SkeletonKind::BCGSI_A_1S:
    // The loop muscle is CholQR by construction.
    b.alpha1 = 2;
    b.alpha2 = 2;
    b.theta = 3;
    b.loo_exponent = 2;
    b.gated = b.alpha_a <= 2;
    break;
  }
  return b;
}

Envelope bound_envelope(const BoundSpec &spec, double kappa, double eps) {
  if (!(kappa >= 1.0))
    throw Error("condition number must be >= 1");
  Envelope env;
  env.applicable = spec.gated && eps * std::pow(kappa, spec.theta) <= 0.5;
  env.loo_bound = kBoundConstant * eps * std::pow(kappa, spec.loo_exponent);
  return env;
}

} // namespace bgs
