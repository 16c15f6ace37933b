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

#include "bgs/matgen.hpp"

#include "bgs/kernels.hpp"
#include "bgs/linalg.hpp"
#include "bgs/muscles.hpp"
#include "bgs/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

namespace bgs {

std::string_view matrix_class_name(MatrixClass cls) {
  switch (cls) {
  case MatrixClass::Monomial:
    return "monomial";
  case MatrixClass::Piled:
    return "piled";
  case MatrixClass::Default:
    return "default";
  }
  return "?";
}

std::optional<MatrixClass> parse_matrix_class(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "monomial")
    return MatrixClass::Monomial;
  if (t == "piled")
    return MatrixClass::Piled;
  if (t == "default")
    return MatrixClass::Default;
  return std::nullopt;
}

namespace {

// Substream tags; part of the documented reproduction recipe.
constexpr std::uint64_t kStreamLeft = 1;
constexpr std::uint64_t kStreamRight = 2;
constexpr std::uint64_t kStreamPiledFirst = 10;
constexpr std::uint64_t kStreamPiledZ = 1000;
constexpr std::uint64_t kStreamMonomial = 100000;

DenseMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  DenseMatrix g(rows, cols);
  for (std::size_t k = 0; k < g.size(); ++k)
    g.data()[k] = rng.normal();
  return g;
}

void require_tall(const MatrixClassSpec &spec) {
  if (spec.m < spec.p * spec.s)
    throw Error("matrix must be tall: m >= p*s");
  if (spec.p == 0 || spec.s == 0)
    throw Error("p and s must be positive");
}

} // namespace

DenseMatrix svd_with_cond(std::size_t rows, std::size_t cols, double kappa, std::uint64_t seed) {
  if (!(kappa >= 1.0))
    throw Error("condition number target must be >= 1");
  if (rows < cols || cols == 0)
    throw Error("svd_with_cond needs rows >= cols > 0");
  const DenseMatrix u = house_qr(gaussian(rows, cols, seed, kStreamLeft)).q;
  const DenseMatrix v = house_qr(gaussian(cols, cols, seed, kStreamRight)).q;
  // U diag(sigma) V^T with sigma_j = kappa^{-j/(cols-1)}.
  DenseMatrix us = u;
  const double decades = std::log10(kappa);
  for (std::size_t j = 0; j < cols; ++j) {
    const double sigma = cols == 1 ? 1.0 : std::pow(10.0, -decades * static_cast<double>(j) / static_cast<double>(cols - 1));
    for (std::size_t i = 0; i < rows; ++i)
      us(i, j) *= sigma;
  }
  return kernels::product(us, v.transpose());
}

BlockMatrix gen_monomial(const MatrixClassSpec &spec) {
  require_tall(spec);
  const std::size_t n = spec.p * spec.s;
  if (spec.r * spec.t != n || spec.t == 0)
    throw Error("monomial matrix needs r*t == p*s");
  const std::size_t m = spec.m;
  std::vector<double> eig(m);
  for (std::size_t i = 0; i < m; ++i)
    eig[i] = m == 1 ? 0.1 : 0.1 + (10.0 - 0.1) * static_cast<double>(i) / static_cast<double>(m - 1);

  DenseMatrix x(m, n);
  for (std::size_t k = 0; k < spec.r; ++k) {
    CounterRng rng(spec.seed, kStreamMonomial + k);
    std::vector<double> v(m);
    double nrm2 = 0.0;
    for (double &vi : v) {
      vi = rng.uniform(-1.0, 1.0);
      nrm2 += vi * vi;
    }
    const double nrm = std::sqrt(nrm2);
    for (double &vi : v)
      vi /= nrm;
    for (std::size_t j = 0; j < spec.t; ++j) {
      const std::size_t col = k * spec.t + j;
      for (std::size_t i = 0; i < m; ++i)
        x(i, col) = v[i];
      for (std::size_t i = 0; i < m; ++i)
        v[i] *= eig[i];
    }
  }
  return BlockMatrix(std::move(x), spec.s);
}

BlockMatrix gen_piled(const MatrixClassSpec &spec) {
  require_tall(spec);
  if (!(spec.kappa_x1 >= 1.0) || !(spec.kappa_z >= 1.0))
    throw Error("piled condition numbers must be >= 1");
  if (!(spec.z_scale > 0.0))
    throw Error("piled z_scale must be positive");
  const std::size_t m = spec.m;
  const std::size_t s = spec.s;
  DenseMatrix x(m, spec.p * s);
  DenseMatrix prev = svd_with_cond(m, s, spec.kappa_x1, mix64(spec.seed ^ kStreamPiledFirst));
  x.set_block(0, 0, prev);
  for (std::size_t k = 1; k < spec.p; ++k) {
    const DenseMatrix z = svd_with_cond(m, s, spec.kappa_z, mix64(spec.seed ^ (kStreamPiledZ + k)));
    prev = prev + spec.z_scale * z;
    x.set_block(0, k * s, prev);
  }
  return BlockMatrix(std::move(x), s);
}

BlockMatrix gen_default(const MatrixClassSpec &spec) {
  require_tall(spec);
  if (!(spec.kappa >= 1.0))
    throw Error("condition number target must be >= 1");
  return BlockMatrix(svd_with_cond(spec.m, spec.p * spec.s, spec.kappa, spec.seed), spec.s);
}

BlockMatrix generate(const MatrixClassSpec &spec) {
  switch (spec.cls) {
  case MatrixClass::Monomial:
    return gen_monomial(spec);
  case MatrixClass::Piled:
    return gen_piled(spec);
  case MatrixClass::Default:
    return gen_default(spec);
  }
  throw Error("unknown matrix class");
}

std::vector<std::size_t> divisors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t d = 1; d <= n; ++d)
    if (n % d == 0)
      out.push_back(d);
  return out;
}

namespace {
double safe_log10_cond(const BlockMatrix &x) {
  try {
    return std::log10(cond_2(x.data()));
  } catch (const Error &) {
    return std::numeric_limits<double>::infinity();
  }
}
} // namespace

PiledCalibration calibrate_piled(const MatrixClassSpec &spec, double target) {
  if (!(target >= 1.0))
    throw Error("condition number target must be >= 1");
  MatrixClassSpec trial = spec;
  trial.cls = MatrixClass::Piled;
  const double goal = std::log10(target);
  auto measure = [&](double log_scale) {
    trial.z_scale = std::pow(10.0, log_scale);
    return safe_log10_cond(gen_piled(trial));
  };

  // kappa falls as the increments grow.
  double lo = -18.0;
  double hi = 2.0;
  double best_scale = hi;
  double best_log = measure(hi);
  double best_err = std::abs(best_log - goal);
  for (int it = 0; it < 80 && best_err > std::log10(1.05); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double got = measure(mid);
    const double err = std::abs(got - goal);
    if (err < best_err) {
      best_err = err;
      best_scale = mid;
      best_log = got;
    }
    if (got > goal)
      lo = mid;
    else
      hi = mid;
  }
  return {std::pow(10.0, best_scale), std::pow(10.0, best_log), best_err <= std::log10(2.0)};
}

std::size_t monomial_t_for_kappa(const MatrixClassSpec &spec, double target) {
  const std::size_t n = spec.p * spec.s;
  const double goal = std::log10(target);
  std::size_t best_t = 1;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t t : divisors(n)) {
    MatrixClassSpec trial = spec;
    trial.cls = MatrixClass::Monomial;
    trial.t = t;
    trial.r = n / t;
    const double err = std::abs(safe_log10_cond(gen_monomial(trial)) - goal);
    if (err < best_err) {
      best_err = err;
      best_t = t;
    }
  }
  return best_t;
}

} // namespace bgs
