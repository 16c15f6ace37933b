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

// Serial reference kernels against their OpenMP counterparts on the
// tall-skinny shapes of the Gram-Schmidt loops.

#include "bgs/kernels.hpp"
#include "bgs/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace bgs;

DenseMatrix filled(std::size_t rows, std::size_t cols, std::uint64_t stream) {
  CounterRng rng(7, stream);
  DenseMatrix a(rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k)
    a.data()[k] = rng.uniform(-1.0, 1.0);
  return a;
}

using Kernel = void (*)(ConstMatView, ConstMatView, MatView);

// Q^T X with Q m x (k s) and X m x s.
void inner(benchmark::State &state, Kernel kernel) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const DenseMatrix q = filled(m, n, 1);
  const DenseMatrix x = filled(m, 5, 2);
  DenseMatrix c(n, 5);
  for (auto _ : state) {
    kernel(q, x, c.view());
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(2 * m * n * 5));
}

// X -= Q S with S (k s) x s.
void update(benchmark::State &state, Kernel kernel) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const DenseMatrix q = filled(m, n, 1);
  const DenseMatrix s = filled(n, 5, 3);
  DenseMatrix x = filled(m, 5, 2);
  for (auto _ : state) {
    kernel(q, s, x.view());
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(2 * m * n * 5));
}

void product(benchmark::State &state, Kernel kernel) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const DenseMatrix q = filled(m, n, 1);
  const DenseMatrix s = filled(n, 5, 3);
  DenseMatrix x(m, 5);
  for (auto _ : state) {
    kernel(q, s, x.view());
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(2 * m * n * 5));
}

void shapes(benchmark::internal::Benchmark *b) {
  for (int m : {1000, 100000})
    for (int n : {5, 50})
      b->Args({m, n});
}

} // namespace

BENCHMARK_CAPTURE(inner, serial, &kernels::serial::gemm_tn)->Apply(shapes);
BENCHMARK_CAPTURE(inner, omp, &kernels::omp::gemm_tn)->Apply(shapes);
BENCHMARK_CAPTURE(update, serial, &kernels::serial::gemm_nn_sub)->Apply(shapes);
BENCHMARK_CAPTURE(update, omp, &kernels::omp::gemm_nn_sub)->Apply(shapes);
BENCHMARK_CAPTURE(product, serial, &kernels::serial::gemm_nn)->Apply(shapes);
BENCHMARK_CAPTURE(product, omp, &kernels::omp::gemm_nn)->Apply(shapes);

BENCHMARK_MAIN();
