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

#include "bgs/linalg.hpp"
#include "bgs/matrix_io.hpp"
#include "bgs/rng.hpp"

#include "support.hpp"

#include <doctest.h>

#include <boost/math/distributions/normal.hpp>

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace bgs;
using namespace bgs::test;

TEST_CASE("SplitMix64 reference values") {
  // Published SplitMix64 outputs for state 0: the first draw is mix64(gamma).
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(2 * 0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
  CHECK(mix64(3 * 0x9e3779b97f4a7c15ULL) == 0x06c45d188009454fULL);
}

TEST_CASE("counter stream is random access and reproducible") {
  CounterRng a(42, 7);
  CounterRng b(42, 7);
  for (int i = 0; i < 10; ++i)
    CHECK(a.next_u64() == b.at(static_cast<std::uint64_t>(i)));
  CHECK(a.position() == 10);
  CHECK(CounterRng(42, 7).at(0) != CounterRng(42, 8).at(0));
  CHECK(CounterRng(42, 7).at(0) != CounterRng(43, 7).at(0));

  CounterRng u(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform01();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("normal variates are the inverse CDF of the uniform draw") {
  const boost::math::normal_distribution<double> nd;
  CounterRng u(9, 3);
  CounterRng g(9, 3);
  double sum = 0.0, sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double want = boost::math::quantile(nd, u.uniform01());
    const double got = g.normal();
    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    sum += got;
    sum2 += got * got;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sum2 / n - 1.0) < 0.05);
}

TEST_CASE("divisors") {
  CHECK(divisors(1) == std::vector<std::size_t>{1});
  CHECK(divisors(12) == std::vector<std::size_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(50) == std::vector<std::size_t>{1, 2, 5, 10, 25, 50});
  CHECK(divisors(24).size() == 8);
}

TEST_CASE("matrix class names") {
  for (MatrixClass c : {MatrixClass::Monomial, MatrixClass::Piled, MatrixClass::Default})
    CHECK(parse_matrix_class(matrix_class_name(c)) == c);
  CHECK(parse_matrix_class("PILED") == MatrixClass::Piled);
  CHECK_FALSE(parse_matrix_class("hilbert").has_value());
}

TEST_CASE("svd_with_cond has the requested spectrum") {
  for (double kappa : {1.0, 1e3, 1e10}) {
    const DenseMatrix a = svd_with_cond(40, 8, kappa, 3);
    const Eigen::VectorXd sv = eigen_singular_values(a);
    for (int j = 0; j < 8; ++j) {
      const double want = std::pow(kappa, -j / 7.0);
      CHECK(std::abs(sv(j) - want) <= 1e-12);
    }
    CHECK(std::abs(oracle_cond(a) / kappa - 1.0) <= 1e-13 * kappa);
  }
  CHECK_THROWS_AS(svd_with_cond(4, 5, 10, 1), Error);
  CHECK_THROWS_AS(svd_with_cond(5, 4, 0.5, 1), Error);
}

TEST_CASE("default class") {
  MatrixClassSpec spec;
  spec.kappa = 1e6;
  const BlockMatrix x = generate(spec);
  CHECK(x.rows() == 100);
  CHECK(x.cols() == 50);
  CHECK(x.block_width() == 5);
  CHECK(std::abs(oracle_cond(x.data()) / 1e6 - 1.0) < 1e-8);
  CHECK(generate(spec).data() == x.data());
  spec.seed = 43;
  CHECK_FALSE(generate(spec).data() == x.data());

  MatrixClassSpec wide;
  wide.m = 10;
  CHECK_THROWS_WITH_AS(generate(wide), "matrix must be tall: m >= p*s", Error);
}

TEST_CASE("monomial panels are Krylov sequences") {
  MatrixClassSpec spec;
  spec.cls = MatrixClass::Monomial;
  spec.m = 100;
  spec.p = 10;
  spec.s = 5;
  spec.t = 5;
  spec.r = 10;
  const BlockMatrix x = generate(spec);
  const DenseMatrix &d = x.data();
  for (std::size_t k = 0; k < spec.r; ++k) {
    const std::size_t c0 = k * spec.t;
    double nrm = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
      nrm += d(i, c0) * d(i, c0);
      CHECK(std::abs(d(i, c0)) <= 1.0);
    }
    CHECK(std::abs(nrm - 1.0) <= 1e-14);
    for (std::size_t j = 1; j < spec.t; ++j)
      for (std::size_t i = 0; i < 100; ++i) {
        const double lambda = 0.1 + 9.9 * static_cast<double>(i) / 99.0;
        CHECK(std::abs(d(i, c0 + j) - lambda * d(i, c0 + j - 1)) <= 1e-15 * std::abs(lambda * d(i, c0 + j - 1)) + 1e-300);
      }
  }

  spec.r = 3;
  CHECK_THROWS_WITH_AS(generate(spec), "monomial matrix needs r*t == p*s", Error);
}

TEST_CASE("monomial conditioning grows with the panel length") {
  MatrixClassSpec spec;
  spec.cls = MatrixClass::Monomial;
  double prev = 0.0;
  for (std::size_t t : {1, 2, 5, 10}) {
    spec.t = t;
    spec.r = 50 / t;
    const double k = oracle_cond(gen_monomial(spec).data());
    CHECK(k > prev);
    prev = k;
  }
  CHECK(prev > 1e9);

  spec.t = 0;
  spec.r = 0;
  CHECK(monomial_t_for_kappa(spec, 1.0) == 1);
  CHECK(monomial_t_for_kappa(spec, 1e11) == 10);
  CHECK(monomial_t_for_kappa(spec, 1e300) == 50);
}

TEST_CASE("piled matrices accumulate scaled increments") {
  MatrixClassSpec spec;
  spec.cls = MatrixClass::Piled;
  spec.m = 80;
  spec.p = 6;
  spec.s = 4;
  spec.kappa_x1 = 30;
  spec.kappa_z = 1e3;
  spec.z_scale = 0.25;
  const BlockMatrix x = generate(spec);
  CHECK(std::abs(oracle_cond(x.block(0)) / 30 - 1.0) < 1e-10);
  for (std::size_t k = 1; k < 6; ++k) {
    const DenseMatrix z = DenseMatrix(x.block(k)) - DenseMatrix(x.block(k - 1));
    const Eigen::VectorXd sv = eigen_singular_values(z);
    CHECK(std::abs(sv(0) - 0.25) < 1e-12);
    CHECK(std::abs(sv(0) / sv(3) / 1e3 - 1.0) < 1e-6);
  }
  spec.z_scale = 0.0;
  CHECK_THROWS_AS(generate(spec), Error);
}

TEST_CASE("piled calibration hits the target") {
  MatrixClassSpec spec;
  spec.cls = MatrixClass::Piled;
  for (double target : {1e4, 1e8, 1e12}) {
    const PiledCalibration cal = calibrate_piled(spec, target);
    CHECK(cal.converged);
    MatrixClassSpec s = spec;
    s.z_scale = cal.z_scale;
    const double got = oracle_cond(gen_piled(s).data());
    CHECK(std::abs(std::log10(got / target)) <= std::log10(1.06));
    // Two SVDs of the same matrix agree on sigma_min to about eps kappa.
    CHECK(std::abs(cal.kappa_actual / got - 1.0) <= kC * kEps * target);
  }
  // Below the floor set by kappa_x1 and kappa_z the target cannot be met.
  CHECK_FALSE(calibrate_piled(spec, 2.0).converged);
}

TEST_CASE("BGSM round trip is exact") {
  DenseMatrix a = random_matrix(7, 3, 11);
  a(0, 0) = -0.0;
  a(1, 1) = std::numeric_limits<double>::denorm_min();
  a(2, 2) = std::numeric_limits<double>::quiet_NaN();
  std::stringstream ss;
  write_bgsm(ss, a);
  const std::string bytes = ss.str();
  REQUIRE(bytes.size() == 4 + 16 + 21 * 8);
  CHECK(bytes.substr(0, 4) == "BGSM");
  CHECK(static_cast<unsigned char>(bytes[4]) == 7);
  CHECK(static_cast<unsigned char>(bytes[12]) == 3);
  std::stringstream in(bytes);
  const DenseMatrix b = read_bgsm(in);
  REQUIRE(b.rows() == 7);
  REQUIRE(b.cols() == 3);
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(std::bit_cast<std::uint64_t>(a.data()[k]) == std::bit_cast<std::uint64_t>(b.data()[k]));

  std::stringstream bad("XXXX");
  CHECK_THROWS_WITH_AS(read_bgsm(bad), "not a BGSM stream (bad magic)", Error);
  std::stringstream cut(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_WITH_AS(read_bgsm(cut), "truncated BGSM stream", Error);
}

TEST_CASE("MatrixMarket round trip") {
  const DenseMatrix a = svd_with_cond(9, 4, 1e5, 2);
  std::stringstream ss;
  write_matrix_market(ss, a);
  CHECK(ss.str().rfind("%%MatrixMarket matrix array real general", 0) == 0);
  std::stringstream in(ss.str());
  CHECK(read_matrix_market(in) == a);

  std::stringstream coord("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n");
  CHECK_THROWS_AS(read_matrix_market(coord), Error);

  const auto path = (std::filesystem::temp_directory_path() / "bgs_test_roundtrip.bgsm").string();
  write_bgsm(path, a);
  CHECK(read_bgsm(path) == a);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_bgsm("/nonexistent/dir/x.bgsm"), Error);
}
