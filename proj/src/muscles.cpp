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

#include "bgs/muscles.hpp"

#include "bgs/kernels.hpp"
#include "bgs/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

namespace bgs {

int IOSpec::alpha() const {
  switch (kind) {
  case IOKind::HouseQR:
  case IOKind::GivensQR:
    return 0;
  case IOKind::MGS:
    return 1;
  case IOKind::CholQR:
    return 2;
  }
  return 0;
}

std::size_t IOSpec::sync_cost(std::size_t block_width) const {
  return kind == IOKind::CholQR ? 1 : block_width;
}

std::string_view IOSpec::name() const { return io_name(kind); }

std::string_view io_name(IOKind kind) {
  switch (kind) {
  case IOKind::HouseQR:
    return "HouseQR";
  case IOKind::GivensQR:
    return "GivensQR";
  case IOKind::MGS:
    return "MGS";
  case IOKind::CholQR:
    return "CholQR";
  }
  return "?";
}

std::optional<IOKind> parse_io(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "houseqr")
    return IOKind::HouseQR;
  if (lower == "givensqr")
    return IOKind::GivensQR;
  if (lower == "mgs")
    return IOKind::MGS;
  if (lower == "cholqr")
    return IOKind::CholQR;
  return std::nullopt;
}

namespace {

void require_tall(ConstMatView x) {
  if (x.rows < x.cols)
    throw Error("block wider than tall");
}

// Flip signs so that diag(R) >= 0; Q absorbs the matching column flips.
void make_diagonal_nonnegative(DenseMatrix &q, DenseMatrix &r) {
  for (std::size_t j = 0; j < r.rows(); ++j) {
    if (!(r(j, j) < 0.0))
      continue;
    for (std::size_t c = j; c < r.cols(); ++c)
      r(j, c) = -r(j, c);
    for (std::size_t i = 0; i < q.rows(); ++i)
      q(i, j) = -q(i, j);
  }
}

DenseMatrix upper_square(const DenseMatrix &a, std::size_t n) {
  DenseMatrix r(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i)
      r(i, j) = a(i, j);
  return r;
}

} // namespace

QROutput house_qr(ConstMatView x) {
  require_tall(x);
  const std::size_t m = x.rows;
  const std::size_t n = x.cols;
  DenseMatrix a(x);
  // Reflector k is I - tau_k v_k v_k^T with v_k stored in column k of `vs`.
  DenseMatrix vs(m, n);
  std::vector<double> tau(n, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i)
      norm = std::hypot(norm, a(i, k));
    if (norm == 0.0)
      continue;
    const double alpha = a(k, k) > 0.0 ? -norm : norm;
    vs(k, k) = a(k, k) - alpha;
    for (std::size_t i = k + 1; i < m; ++i)
      vs(i, k) = a(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i)
      vnorm2 += vs(i, k) * vs(i, k);
    if (vnorm2 == 0.0)
      continue;
    tau[k] = 2.0 / vnorm2;
    a(k, k) = alpha;
    for (std::size_t i = k + 1; i < m; ++i)
      a(i, k) = 0.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i)
        dot += vs(i, k) * a(i, j);
      const double f = tau[k] * dot;
      for (std::size_t i = k; i < m; ++i)
        a(i, j) -= f * vs(i, k);
    }
  }

  // Economic Q: apply the reflectors in reverse to the first n columns of I.
  DenseMatrix q(m, n);
  for (std::size_t j = 0; j < n; ++j)
    q(j, j) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    if (tau[k] == 0.0)
      continue;
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i)
        dot += vs(i, k) * q(i, j);
      const double f = tau[k] * dot;
      for (std::size_t i = k; i < m; ++i)
        q(i, j) -= f * vs(i, k);
    }
  }

  DenseMatrix r = upper_square(a, n);
  make_diagonal_nonnegative(q, r);
  return {std::move(q), UpperTriangular(std::move(r)), false};
}

QROutput givens_qr(ConstMatView x) {
  require_tall(x);
  const std::size_t m = x.rows;
  const std::size_t n = x.cols;
  DenseMatrix a(x);

  struct Rot {
    std::size_t row; // rotates rows (row - 1, row)
    double c;
    double s;
  };
  std::vector<Rot> rots;
  rots.reserve(m * n);

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = m - 1; i > j; --i) {
      const double f = a(i - 1, j);
      const double g = a(i, j);
      if (g == 0.0)
        continue;
      const double rr = std::hypot(f, g);
      const double c = f / rr;
      const double s = g / rr;
      for (std::size_t col = j; col < n; ++col) {
        const double top = a(i - 1, col);
        const double bot = a(i, col);
        a(i - 1, col) = c * top + s * bot;
        a(i, col) = -s * top + c * bot;
      }
      a(i, j) = 0.0;
      rots.push_back({i, c, s});
    }
  }

  DenseMatrix q(m, n);
  for (std::size_t j = 0; j < n; ++j)
    q(j, j) = 1.0;
  for (auto it = rots.rbegin(); it != rots.rend(); ++it) {
    const std::size_t i = it->row;
    for (std::size_t col = 0; col < n; ++col) {
      const double top = q(i - 1, col);
      const double bot = q(i, col);
      q(i - 1, col) = it->c * top - it->s * bot;
      q(i, col) = it->s * top + it->c * bot;
    }
  }

  DenseMatrix r = upper_square(a, n);
  make_diagonal_nonnegative(q, r);
  return {std::move(q), UpperTriangular(std::move(r)), false};
}

QROutput mgs_qr(ConstMatView x) {
  require_tall(x);
  const std::size_t m = x.rows;
  const std::size_t n = x.cols;
  DenseMatrix q(x);
  UpperTriangular r(n);
  for (std::size_t j = 0; j < n; ++j) {
    double *qj = q.data() + j * m;
    for (std::size_t i = 0; i < j; ++i) {
      const double *qi = q.data() + i * m;
      double dot = 0.0;
      for (std::size_t l = 0; l < m; ++l)
        dot += qi[l] * qj[l];
      r.set(i, j, dot);
      for (std::size_t l = 0; l < m; ++l)
        qj[l] -= dot * qi[l];
    }
    double nrm2 = 0.0;
    for (std::size_t l = 0; l < m; ++l)
      nrm2 += qj[l] * qj[l];
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0.0)
      throw Error("rank deficient block");
    r.set(j, j, nrm);
    for (std::size_t l = 0; l < m; ++l)
      qj[l] /= nrm;
  }
  return {std::move(q), std::move(r), false};
}

CholResult chol_free(const DenseMatrix &g) {
  if (g.rows() != g.cols())
    throw Error("Gram matrix must be square");
  const std::size_t n = g.rows();
  DenseMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      a(i, j) = 0.5 * (g(i, j) + g(j, i));

  UpperTriangular r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = std::sqrt(a(k, k));
    r.set(k, k, pivot);
    for (std::size_t j = k + 1; j < n; ++j)
      r.set(k, j, a(k, j) / pivot);
    for (std::size_t j = k + 1; j < n; ++j)
      for (std::size_t i = k + 1; i <= j; ++i)
        a(i, j) -= r(k, i) * r(k, j);
  }

  bool failed = !r.dense().all_finite();
  for (std::size_t k = 0; k < n && !failed; ++k)
    failed = r(k, k) == 0.0;
  return {std::move(r), failed};
}

QROutput chol_qr(ConstMatView x) {
  require_tall(x);
  const DenseMatrix gram = kernels::inner(x, x);
  CholResult chol = chol_free(gram);
  if (chol.failed)
    return {nan_matrix(x.rows, x.cols), std::move(chol.r), true};
  DenseMatrix q = tri_solve_right(x, chol.r);
  return {std::move(q), std::move(chol.r), false};
}

QROutput apply_io(const IOSpec &spec, ConstMatView x, SyncLedger &ledger, std::size_t block) {
  switch (spec.kind) {
  case IOKind::HouseQR:
    ledger.record(block, "io-houseqr", spec.sync_cost(x.cols));
    return house_qr(x);
  case IOKind::GivensQR:
    ledger.record(block, "io-givensqr", spec.sync_cost(x.cols));
    return givens_qr(x);
  case IOKind::MGS:
    ledger.record(block, "io-mgs", spec.sync_cost(x.cols));
    return mgs_qr(x);
  case IOKind::CholQR:
    ledger.record(block, "io-gram", spec.sync_cost(x.cols));
    return chol_qr(x);
  }
  throw Error("unknown intraorthogonalization kind");
}

} // namespace bgs
