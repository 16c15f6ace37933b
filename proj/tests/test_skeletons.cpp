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

#include "bgs/skeletons.hpp"

#include "bgs/matgen.hpp"
#include "bgs/metrics.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace bgs;
using namespace bgs::test;

namespace {

using Runner = std::function<BGSResult(const BlockMatrix &)>;

struct Named {
  const char *name;
  Runner run;
};

// Every skeleton with the IO choices used throughout the roadmap experiments.
std::vector<Named> all_variants() {
  return {
      {"BCGS∘CholQR", [](const BlockMatrix &x) { return bcgs(x, kCholQR); }},
      {"BCGS∘HouseQR", [](const BlockMatrix &x) { return bcgs(x, kHouseQR); }},
      {"BCGS-A", [](const BlockMatrix &x) { return bcgs_a(x, kHouseQR, kCholQR); }},
      {"BCGSI+∘CholQR", [](const BlockMatrix &x) { return bcgsi_plus(x, kCholQR); }},
      {"BCGSI+A", [](const BlockMatrix &x) { return bcgsi_plus_a(x, kHouseQR, kCholQR, kCholQR); }},
      {"BCGSI+A∘MGS", [](const BlockMatrix &x) { return bcgsi_plus_a(x, kHouseQR, kMGS, kGivensQR); }},
      {"3S∘HouseQR", [](const BlockMatrix &x) { return bcgsi_a_3s(x, kHouseQR, kHouseQR); }},
      {"3S∘CholQR", [](const BlockMatrix &x) { return bcgsi_a_3s(x, kHouseQR, kCholQR); }},
      {"2S", [](const BlockMatrix &x) { return bcgsi_a_2s(x, kHouseQR); }},
      {"1S", [](const BlockMatrix &x) { return bcgsi_a_1s(x, kHouseQR); }},
  };
}

BlockMatrix monomial(std::size_t m, std::size_t p, std::size_t s, std::size_t t, std::uint64_t seed = 42) {
  MatrixClassSpec spec;
  spec.cls = MatrixClass::Monomial;
  spec.m = m;
  spec.p = p;
  spec.s = s;
  spec.t = t;
  spec.r = p * s / t;
  spec.seed = seed;
  return gen_monomial(spec);
}

BlockMatrix conditioned(std::size_t m, std::size_t p, std::size_t s, double kappa, std::uint64_t seed) {
  return BlockMatrix(oracle_conditioned(m, p * s, kappa, seed), s);
}

double rel_frobenius_diff(ConstMatView a, ConstMatView b) {
  DenseMatrix d(a);
  d = d - DenseMatrix(b);
  return frobenius(d) / frobenius(b);
}

} // namespace

TEST_CASE("skeleton names round-trip") {
  for (SkeletonKind k : kAllSkeletons)
    CHECK(parse_skeleton(skeleton_name(k)) == k);
  CHECK(parse_skeleton("1s") == SkeletonKind::BCGSI_A_1S);
  CHECK(parse_skeleton("BCGSI+a") == SkeletonKind::BCGSI_PLUS_A);
  CHECK(parse_skeleton("bcgs-a") == SkeletonKind::BCGS_A);
  CHECK_FALSE(parse_skeleton("bmgs").has_value());
}

TEST_CASE("identity input gives identity factors") {
  const BlockMatrix x4(DenseMatrix::identity(4), 2);
  const BGSResult r = bcgs_a(x4, kHouseQR, kHouseQR);
  CHECK(r.q.data() == DenseMatrix::identity(4));
  CHECK(r.r.dense() == DenseMatrix::identity(4));

  const BlockMatrix x6(DenseMatrix::identity(6), 2);
  for (const Named &v : all_variants()) {
    CAPTURE(v.name);
    const BGSResult out = v.run(x6);
    CHECK_FALSE(out.failed);
    CHECK(max_abs_diff(out.q.data(), DenseMatrix::identity(6)) <= 1e-15);
    CHECK(max_abs_diff(out.r.dense(), DenseMatrix::identity(6)) <= 1e-15);
  }

  const BGSResult one = bcgsi_a_1s(BlockMatrix(DenseMatrix::identity(3), 1), kHouseQR);
  CHECK(one.q.data() == DenseMatrix::identity(3));
  CHECK(one.r.dense() == DenseMatrix::identity(3));
}

TEST_CASE("a single block reduces to the first-block routine") {
  const DenseMatrix x = random_matrix(20, 4, 1);
  const BlockMatrix b(x, 4);
  for (const IOSpec &io : {kHouseQR, kCholQR, kMGS}) {
    const QROutput want = [&] {
      SyncLedger l;
      return apply_io(io, x, l, 1);
    }();
    for (const BGSResult &got : {bcgs_a(b, io, kCholQR), bcgsi_plus_a(b, io, kCholQR, kCholQR),
                                 bcgsi_a_3s(b, io, kCholQR), bcgsi_a_2s(b, io), bcgsi_a_1s(b, io)}) {
      CHECK(got.q.data() == want.q);
      CHECK(got.r == want.r);
      CHECK(got.ledger.total() == io.sync_cost(4));
    }
  }
}

TEST_CASE("aliases run the same code as the tied -A variants") {
  const BlockMatrix x = monomial(100, 10, 5, 5);
  for (const IOSpec &io : {kHouseQR, kCholQR, kMGS}) {
    const BGSResult a = bcgs(x, io);
    const BGSResult b = bcgs_a(x, io, io);
    CHECK(a.q.data() == b.q.data());
    CHECK(a.r == b.r);
    CHECK(a.ledger.events() == b.ledger.events());

    const BGSResult c = bcgsi_plus(x, io);
    const BGSResult d = bcgsi_plus_a(x, io, io, io);
    CHECK(c.q.data() == d.q.data());
    CHECK(c.r == d.r);
  }
}

TEST_CASE("BCGS-A diagonal blocks of R match a full Householder QR") {
  MatrixClassSpec spec;
  spec.cls = MatrixClass::Monomial;
  spec.m = 100;
  spec.p = 4;
  spec.s = 2;
  spec.t = monomial_t_for_kappa(spec, 1e6);
  spec.r = 8 / spec.t;
  const BlockMatrix x = gen_monomial(spec);
  const double kappa = oracle_cond(x.data());
  CAPTURE(kappa);
  const DenseMatrix want = oracle_r_factor(x.data());
  const BGSResult got = bcgs_a(x, kHouseQR, kHouseQR);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = i; j < 2; ++j) {
        const double w = want(2 * k + i, 2 * k + j);
        const double g = got.r(2 * k + i, 2 * k + j);
        CHECK(std::abs(g - w) <= kC * kEps * kappa * std::abs(want(2 * k + j, 2 * k + j)) + kC * kEps * std::abs(w));
      }
}

TEST_CASE("BCGSI+A keeps O(eps) orthogonality on monomial matrices") {
  for (std::size_t t : {1, 2, 5}) {
    const BlockMatrix x = monomial(100, 10, 5, t);
    const double kappa = cond_2(x.data());
    REQUIRE(kappa <= 1e7);
    const BGSResult r = bcgsi_plus_a(x, kHouseQR, kCholQR, kCholQR);
    CHECK(oracle_loo(r.q.data()) <= kC * kEps);
    CHECK(rel_chol_res(x.data(), r.r) <= kC * kEps);
  }
  const BlockMatrix bad = monomial(100, 10, 5, 10);
  REQUIRE(cond_2(bad.data()) >= 1e9);
  const BGSResult plus = bcgsi_plus(bad, kCholQR);
  CHECK((plus.failed || loo(plus.q.data()) > kC * kEps));
}

TEST_CASE("3S envelopes") {
  for (std::size_t t : {1, 2, 5}) {
    const BlockMatrix x = monomial(100, 10, 5, t);
    const double kappa = cond_2(x.data());
    REQUIRE(kappa <= 1e8);
    const BGSResult r = bcgsi_a_3s(x, kHouseQR, kHouseQR);
    CHECK(oracle_loo(r.q.data()) <= kC * kEps * kappa);
  }
  // Far beyond 1/sqrt(eps) the Cholesky muscle breaks down.
  const BlockMatrix x = monomial(100, 10, 5, 50);
  const BGSResult r = bcgsi_a_3s(x, kHouseQR, kCholQR);
  CHECK(r.failed);
}

TEST_CASE("2S agrees with 3S over CholQR") {
  for (double kappa : {1.0, 1e2, 1e4}) {
    const BlockMatrix x = conditioned(120, 6, 3, kappa, 17);
    const BGSResult a = bcgsi_a_2s(x, kHouseQR);
    const BGSResult b = bcgsi_a_3s(x, kHouseQR, kCholQR);
    CHECK(max_abs_diff(a.q.data(), b.q.data()) <= kC * kEps * kappa);
    CHECK(max_abs_diff(a.r.dense(), b.r.dense()) <= kC * kEps * kappa);
  }
  for (std::size_t t : {1, 2}) {
    const BlockMatrix x = monomial(100, 10, 5, t);
    const double kappa = cond_2(x.data());
    REQUIRE(kappa <= 2e5);
    CHECK(oracle_loo(bcgsi_a_2s(x, kHouseQR).q.data()) <= kC * kEps * kappa * kappa);
  }
}

TEST_CASE("1S degenerate and column cases") {
  const BlockMatrix x = conditioned(50, 2, 4, 1e3, 23);
  const BGSResult a = bcgsi_a_1s(x, kHouseQR);
  const BGSResult b = bcgsi_a_2s(x, kHouseQR);
  CHECK(max_abs_diff(a.q.data(), b.q.data()) <= kC * kEps);
  CHECK(max_abs_diff(a.r.dense(), b.r.dense()) <= kC * kEps);

  MatrixClassSpec spec;
  spec.cls = MatrixClass::Piled;
  spec.m = 100;
  spec.p = 50;
  spec.s = 1;
  for (double target : {1e4, 1e8, 1e12}) {
    const PiledCalibration cal = calibrate_piled(spec, target);
    REQUIRE(cal.converged);
    MatrixClassSpec s = spec;
    s.z_scale = cal.z_scale;
    const BGSResult r = bcgsi_a_1s(gen_piled(s), kHouseQR);
    CHECK_FALSE(r.failed);
    CHECK(oracle_loo(r.q.data()) <= kC * kEps);
  }
}

TEST_CASE("residual, triangularity and R uniqueness for every skeleton") {
  for (double kappa : {1.0, 1e2, 1e4}) {
    const BlockMatrix x = conditioned(100, 8, 3, kappa, 31);
    const DenseMatrix want = oracle_r_factor(x.data());
    for (const Named &v : all_variants()) {
      CAPTURE(v.name);
      CAPTURE(kappa);
      const BGSResult out = v.run(x);
      REQUIRE_FALSE(out.failed);
      CHECK(oracle_rel_res(x.data(), out.q.data(), out.r.dense()) <= kC * kEps);
      CHECK(rel_frobenius_diff(out.r.dense(), want) <= kC * kEps * kappa);
      for (std::size_t j = 0; j < 24; ++j)
        for (std::size_t i = j + 1; i < 24; ++i)
          CHECK(out.r(i, j) == 0.0);
    }
  }
}

TEST_CASE("residual stays O(eps) on ill-conditioned input whenever the run succeeds") {
  for (std::size_t t : {5, 10}) {
    const BlockMatrix x = monomial(100, 10, 5, t);
    for (const Named &v : all_variants()) {
      CAPTURE(v.name);
      const BGSResult out = v.run(x);
      if (!out.failed)
        CHECK(oracle_rel_res(x.data(), out.q.data(), out.r.dense()) <= kC * kEps);
    }
  }
}

TEST_CASE("stability hierarchy at high condition number") {
  const BlockMatrix x = monomial(100, 10, 5, 10);
  REQUIRE(cond_2(x.data()) >= 1e9);
  const double a = loo(bcgsi_plus_a(x, kHouseQR, kCholQR, kCholQR).q.data());
  const double b = loo(bcgsi_a_3s(x, kHouseQR, kCholQR).q.data());
  const double c = loo(bcgsi_a_1s(x, kHouseQR).q.data());
  CHECK(a <= 10 * b);
  CHECK(b <= 10 * c);
}

TEST_CASE("trace records the algorithm intermediates") {
  const std::size_t m = 60, p = 5, s = 3;
  const BlockMatrix x = conditioned(m, p, s, 1e3, 41);
  SkeletonOptions opts;
  opts.trace = true;

  CHECK_FALSE(bcgsi_a_2s(x, kHouseQR).trace.has_value());

  const BGSResult plus = bcgsi_plus_a(x, kHouseQR, kCholQR, kCholQR, opts);
  REQUIRE(plus.trace.has_value());
  REQUIRE(plus.trace->steps.size() == p);
  for (std::size_t k = 2; k <= p; ++k) {
    const BlockStep &st = plus.trace->step(k);
    CHECK(st.block == k);
    CHECK(st.s_col->rows() == (k - 1) * s);
    CHECK(st.t_col->rows() == (k - 1) * s);
    CHECK(st.s_diag->rows() == s);
    CHECK(st.u_block->rows() == m);
    CHECK(st.sync_events.size() == 4);
  }
  CHECK(plus.trace->step(1).sync_events.size() == 1);

  const BGSResult one = bcgsi_a_1s(x, kHouseQR, opts);
  for (std::size_t k = 2; k < p; ++k) {
    const BlockStep &st = one.trace->step(k);
    CHECK(st.omega->rows() == s);
    CHECK(st.z_block->rows() == (k - 1) * s);
    CHECK(st.p_block->cols() == s);
    CHECK(st.v_block->rows() == m);
    CHECK(st.y_col->rows() == (k - 1) * s);
  }
  CHECK_FALSE(one.trace->step(p).z_block.has_value());
  CHECK(one.trace->step(p).omega.has_value());
}

TEST_CASE("1S reconstructs the projection coefficients of the next block") {
  const std::size_t s = 5;
  for (std::size_t t : {2, 5}) {
    const BlockMatrix x = monomial(100, 10, s, t);
    SkeletonOptions opts;
    opts.trace = true;
    const BGSResult out = bcgsi_a_1s(x, kHouseQR, opts);
    REQUIRE_FALSE(out.failed);
    for (std::size_t k = 2; k < 10; ++k) {
      // S_{1:k,k+1} was recovered from the batched product of iteration k.
      const DenseMatrix &got = *out.trace->step(k + 1).s_col;
      const Eigen::MatrixXd direct = to_eigen(out.q.leading(k)).transpose() * to_eigen(x.block(k));
      const double bound = kC * kEps * oracle_cond(x.leading(k)) * oracle_norm2(x.block(k));
      CHECK((to_eigen(got) - direct).cwiseAbs().maxCoeff() <= bound);
    }
  }
}

TEST_CASE("breakdown is flagged and NaN stays at or after the failing block") {
  const BlockMatrix x = monomial(100, 10, 5, 50);
  for (const Named &v : all_variants()) {
    CAPTURE(v.name);
    const BGSResult out = v.run(x);
    if (!out.failed) {
      CHECK(out.q.data().all_finite());
      continue;
    }
    std::size_t first = 10;
    for (std::size_t k = 0; k < 10 && first == 10; ++k)
      if (DenseMatrix(out.q.block(k)).any_nan())
        first = k;
    REQUIRE(first < 10);
    for (std::size_t k = 0; k < first; ++k)
      CHECK(DenseMatrix(out.q.block(k)).all_finite());
    CHECK(DenseMatrix(out.r.dense().view().col_range(0, first * 5)).all_finite());
  }
}

TEST_CASE("MGS breakdown propagates as an exception") {
  DenseMatrix d(10, 4);
  d(0, 0) = 1;
  d(1, 1) = 1;
  d(0, 2) = 1; // block 2 lies in the span of block 1
  d(1, 3) = 1;
  CHECK_THROWS_WITH_AS(bcgs_a(BlockMatrix(d, 2), kHouseQR, kMGS), "rank deficient block", Error);
}
