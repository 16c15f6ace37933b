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

#include "bgs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace bgs {

namespace {

struct Rotation {
  double c;
  double s;
  double r;
};

// [c s; -s c] maps (f, g) to (r, 0).
Rotation make_rotation(double f, double g) {
  if (g == 0.0)
    return {1.0, 0.0, f};
  const double r = std::hypot(f, g);
  return {f / r, g / r, r};
}

// Reduces the tall matrix `a` (m >= n) to upper bidiagonal form in place
// using alternating left and right Householder reflections.  Only the
// bidiagonal is returned; the reflectors are discarded.
void bidiagonalize(DenseMatrix &a, std::vector<double> &d, std::vector<double> &e) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, 0.0);
  std::vector<double> v(std::max(m, n));

  for (std::size_t k = 0; k < n; ++k) {
    // Left reflector zeroing a(k+1:m, k).
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i)
      norm = std::hypot(norm, a(i, k));
    if (norm != 0.0) {
      const double alpha = a(k, k) > 0.0 ? -norm : norm;
      for (std::size_t i = k; i < m; ++i)
        v[i] = a(i, k);
      v[k] -= alpha;
      double vnorm2 = 0.0;
      for (std::size_t i = k; i < m; ++i)
        vnorm2 += v[i] * v[i];
      if (vnorm2 != 0.0) {
        for (std::size_t j = k + 1; j < n; ++j) {
          double dot = 0.0;
          for (std::size_t i = k; i < m; ++i)
            dot += v[i] * a(i, j);
          const double f = 2.0 * dot / vnorm2;
          for (std::size_t i = k; i < m; ++i)
            a(i, j) -= f * v[i];
        }
      }
      d[k] = alpha;
    } else {
      d[k] = 0.0;
    }

    if (k + 1 >= n)
      continue;
    // Right reflector zeroing a(k, k+2:n).
    norm = 0.0;
    for (std::size_t j = k + 1; j < n; ++j)
      norm = std::hypot(norm, a(k, j));
    if (norm != 0.0) {
      const double alpha = a(k, k + 1) > 0.0 ? -norm : norm;
      for (std::size_t j = k + 1; j < n; ++j)
        v[j] = a(k, j);
      v[k + 1] -= alpha;
      double vnorm2 = 0.0;
      for (std::size_t j = k + 1; j < n; ++j)
        vnorm2 += v[j] * v[j];
      if (vnorm2 != 0.0) {
        for (std::size_t i = k + 1; i < m; ++i) {
          double dot = 0.0;
          for (std::size_t j = k + 1; j < n; ++j)
            dot += a(i, j) * v[j];
          const double f = 2.0 * dot / vnorm2;
          for (std::size_t j = k + 1; j < n; ++j)
            a(i, j) -= f * v[j];
        }
      }
      e[k] = alpha;
    } else {
      e[k] = 0.0;
    }
  }
}

// One implicit-shift QR sweep on the unreduced block d[lo..hi], e[lo..hi-1].
void golub_kahan_step(std::vector<double> &d, std::vector<double> &e, std::size_t lo, std::size_t hi) {
  // Wilkinson shift from the trailing 2x2 of B^T B.
  const double dm = d[hi - 1];
  const double dn = d[hi];
  const double em = e[hi - 1];
  const double el = hi - 1 > lo ? e[hi - 2] : 0.0;
  const double t11 = dm * dm + el * el;
  const double t12 = dm * em;
  const double t22 = dn * dn + em * em;
  const double delta = 0.5 * (t11 - t22);
  const double denom = delta + std::copysign(std::hypot(delta, t12), delta == 0.0 ? 1.0 : delta);
  const double mu = denom != 0.0 ? t22 - t12 * t12 / denom : t22;

  double y = d[lo] * d[lo] - mu;
  double z = d[lo] * e[lo];
  for (std::size_t k = lo; k < hi; ++k) {
    // Right rotation on columns k, k+1.
    Rotation g = make_rotation(y, z);
    if (k > lo)
      e[k - 1] = g.r;
    const double dk = d[k];
    const double ek = e[k];
    d[k] = g.c * dk + g.s * ek;
    e[k] = -g.s * dk + g.c * ek;
    const double bulge = g.s * d[k + 1];
    d[k + 1] = g.c * d[k + 1];

    // Left rotation on rows k, k+1.
    g = make_rotation(d[k], bulge);
    d[k] = g.r;
    const double ek2 = e[k];
    e[k] = g.c * ek2 + g.s * d[k + 1];
    d[k + 1] = -g.s * ek2 + g.c * d[k + 1];
    if (k + 1 < hi) {
      y = e[k];
      z = g.s * e[k + 1];
      e[k + 1] = g.c * e[k + 1];
    }
  }
}

// d[i] == 0 inside an unreduced block: rotate row i's superdiagonal entry
// away to the right so that the block splits.
void chase_row(std::vector<double> &d, std::vector<double> &e, std::size_t i, std::size_t hi) {
  double f = e[i];
  e[i] = 0.0;
  for (std::size_t j = i + 1; j <= hi && f != 0.0; ++j) {
    const Rotation g = make_rotation(d[j], f);
    d[j] = g.r;
    if (j < hi) {
      f = -g.s * e[j];
      e[j] = g.c * e[j];
    }
  }
}

// d[hi] == 0: rotate the last column's superdiagonal entry upward.
void chase_column(std::vector<double> &d, std::vector<double> &e, std::size_t lo, std::size_t hi) {
  double f = e[hi - 1];
  e[hi - 1] = 0.0;
  for (std::size_t j = hi; j-- > lo && f != 0.0;) {
    const Rotation g = make_rotation(d[j], f);
    d[j] = g.r;
    if (j > lo) {
      f = -g.s * e[j - 1];
      e[j - 1] = g.c * e[j - 1];
    }
  }
}

void require_finite(ConstMatView a) {
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t i = 0; i < a.rows; ++i)
      if (!std::isfinite(a(i, j)))
        throw Error("non-finite matrix");
}

} // namespace

std::vector<double> singular_values(ConstMatView a) {
  require_finite(a);
  DenseMatrix work = a.rows >= a.cols ? DenseMatrix(a) : DenseMatrix(a).transpose();
  const std::size_t n = work.cols();
  if (n == 0)
    return {};

  std::vector<double> d;
  std::vector<double> e;
  bidiagonalize(work, d, e);

  double bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    bnorm = std::max(bnorm, std::abs(d[i]) + (i + 1 < n ? std::abs(e[i]) : 0.0));
  const double tol = 1e-15 * bnorm;

  const std::size_t max_sweeps = 100 * n;
  std::size_t sweeps = 0;
  std::size_t hi = n - 1;
  while (hi > 0) {
    for (std::size_t i = 0; i < hi; ++i)
      if (std::abs(e[i]) <= tol)
        e[i] = 0.0;
    if (e[hi - 1] == 0.0) {
      --hi;
      continue;
    }
    std::size_t lo = hi - 1;
    while (lo > 0 && e[lo - 1] != 0.0)
      --lo;

    // Only exact zeros are chased out: tiny diagonals are left to the
    // shifted sweeps so that nearly singular input keeps a positive sigma_min.
    bool chased = false;
    for (std::size_t i = lo; i <= hi; ++i) {
      if (d[i] == 0.0) {
        if (i < hi)
          chase_row(d, e, i, hi);
        else
          chase_column(d, e, lo, hi);
        chased = true;
        break;
      }
    }
    if (chased)
      continue;

    if (++sweeps > max_sweeps)
      throw Error("SVD failed to converge");
    golub_kahan_step(d, e, lo, hi);
  }

  for (double &v : d)
    v = std::abs(v);
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

double spectral_norm(ConstMatView a) {
  const auto sv = singular_values(a);
  return sv.empty() ? 0.0 : sv.front();
}

double sigma_min(ConstMatView a) {
  const auto sv = singular_values(a);
  return sv.empty() ? 0.0 : sv.back();
}

double cond_2(ConstMatView a) {
  const auto sv = singular_values(a);
  if (sv.empty() || sv.back() == 0.0)
    throw Error("singular matrix, kappa undefined");
  return sv.front() / sv.back();
}

DenseMatrix tri_solve_left_transposed(const UpperTriangular &r, ConstMatView b) {
  const std::size_t n = r.order();
  if (b.rows != n)
    throw Error("tri_solve_left_transposed: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (r(i, i) == 0.0)
      throw Error("singular triangular factor");
  DenseMatrix z(b);
  for (std::size_t j = 0; j < z.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = z(i, j);
      for (std::size_t l = 0; l < i; ++l)
        acc -= r(l, i) * z(l, j);
      z(i, j) = acc / r(i, i);
    }
  }
  return z;
}

DenseMatrix tri_solve_right(ConstMatView b, const UpperTriangular &r) {
  const std::size_t n = r.order();
  if (b.cols != n)
    throw Error("tri_solve_right: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (r(i, i) == 0.0)
      throw Error("singular triangular factor");
  DenseMatrix z(b);
  // Column j of Z R = B gives z_j r_jj = b_j - sum_{l<j} z_l r_lj.
  for (std::size_t j = 0; j < n; ++j) {
    double *zj = z.data() + j * z.rows();
    for (std::size_t l = 0; l < j; ++l) {
      const double rlj = r(l, j);
      const double *zl = z.data() + l * z.rows();
      for (std::size_t i = 0; i < z.rows(); ++i)
        zj[i] -= zl[i] * rlj;
    }
    const double rjj = r(j, j);
    for (std::size_t i = 0; i < z.rows(); ++i)
      zj[i] /= rjj;
  }
  return z;
}

} // namespace bgs
