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

#include "bgs/kernels.hpp"

#include "support.hpp"

#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bgs;
using namespace bgs::test;

namespace {

struct ThreadCount {
  explicit ThreadCount(int n) {
#ifdef _OPENMP
    saved = omp_get_max_threads();
    omp_set_num_threads(n);
#else
    (void)n;
#endif
  }
  ~ThreadCount() {
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
  }
  int saved = 1;
};

} // namespace

TEST_CASE("serial kernels match an independent product") {
  const DenseMatrix a = random_matrix(70, 6, 1);
  const DenseMatrix b = random_matrix(70, 4, 2);
  DenseMatrix c(6, 4);
  kernels::serial::gemm_tn(a, b, c.view());
  const Eigen::MatrixXd ref = to_eigen(a).transpose() * to_eigen(b);
  CHECK((to_eigen(c) - ref).norm() <= 1e-13 * ref.norm());

  const DenseMatrix k = random_matrix(6, 4, 3);
  DenseMatrix p(70, 4);
  kernels::serial::gemm_nn(a, k, p.view());
  const Eigen::MatrixXd pref = to_eigen(a) * to_eigen(k);
  CHECK((to_eigen(p) - pref).norm() <= 1e-13 * pref.norm());

  DenseMatrix s = b;
  kernels::serial::gemm_nn_sub(a, k, s.view());
  const Eigen::MatrixXd sref = to_eigen(b) - pref;
  CHECK((to_eigen(s) - sref).norm() <= 1e-13 * sref.norm());
}

TEST_CASE("OpenMP kernels are bit-identical to the serial ones") {
  for (int threads : {1, 2, 3, 8}) {
    ThreadCount tc(threads);
    for (std::size_t m : {1, 63, 64, 65, 1000}) {
      const DenseMatrix a = random_matrix(m, 7, 10 + m);
      const DenseMatrix b = random_matrix(m, 5, 20 + m);
      const DenseMatrix k = random_matrix(7, 5, 30 + m);

      DenseMatrix c1(7, 5), c2(7, 5);
      kernels::serial::gemm_tn(a, b, c1.view());
      kernels::omp::gemm_tn(a, b, c2.view());
      CHECK(c1 == c2);

      DenseMatrix p1(m, 5), p2(m, 5);
      kernels::serial::gemm_nn(a, k, p1.view());
      kernels::omp::gemm_nn(a, k, p2.view());
      CHECK(p1 == p2);

      DenseMatrix s1 = b, s2 = b;
      kernels::serial::gemm_nn_sub(a, k, s1.view());
      kernels::omp::gemm_nn_sub(a, k, s2.view());
      CHECK(s1 == s2);
    }
  }
}

TEST_CASE("dispatchers agree with serial kernels above and below the parallel threshold") {
  ThreadCount tc(4);
  for (std::size_t m : {10, 5000}) {
    const DenseMatrix a = random_matrix(m, 10, 40 + m);
    const DenseMatrix b = random_matrix(m, 5, 50 + m);
    DenseMatrix ref(10, 5);
    kernels::serial::gemm_tn(a, b, ref.view());
    CHECK(kernels::inner(a, b) == ref);

    const DenseMatrix k = random_matrix(10, 5, 60 + m);
    DenseMatrix pref(m, 5);
    kernels::serial::gemm_nn(a, k, pref.view());
    CHECK(kernels::product(a, k) == pref);

    DenseMatrix s1 = b, s2 = b;
    kernels::serial::gemm_nn_sub(a, k, s1.view());
    kernels::subtract_product(s2.view(), a, k);
    CHECK(s1 == s2);
  }
}

TEST_CASE("kernels work on strided views") {
  const DenseMatrix big = random_matrix(40, 12, 7);
  const ConstMatView a = big.view().col_range(2, 3);
  const ConstMatView b = big.view().col_range(8, 4);
  const DenseMatrix c = kernels::inner(a, b);
  const Eigen::MatrixXd ref = to_eigen(a).transpose() * to_eigen(b);
  CHECK((to_eigen(c) - ref).norm() <= 1e-13 * ref.norm());

  DenseMatrix target = random_matrix(40, 12, 8);
  const DenseMatrix before = target;
  const DenseMatrix k = random_matrix(3, 4, 9);
  kernels::subtract_product(target.view().col_range(5, 4), a, k);
  // Columns outside the view are untouched.
  for (std::size_t j : {0, 4, 9, 11})
    for (std::size_t i = 0; i < 40; ++i)
      CHECK(target(i, j) == before(i, j));
}

TEST_CASE("dimension checks") {
  DenseMatrix c(2, 2);
  CHECK_THROWS_WITH_AS(kernels::serial::gemm_tn(DenseMatrix(3, 2), DenseMatrix(4, 2), c.view()),
                       "gemm_tn: dimension mismatch", Error);
  CHECK_THROWS_WITH_AS(kernels::omp::gemm_nn(DenseMatrix(2, 3), DenseMatrix(2, 2), c.view()),
                       "gemm_nn: dimension mismatch", Error);
}
