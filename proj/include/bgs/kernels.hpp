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

/** @file Tall-skinny product kernels.

    Every product in the Gram-Schmidt loops reduces to one of three shapes:
    an inner product C = A^T B over the long (row) dimension, an update
    C -= A B, and a plain product C = A B.  Each kernel comes in two flavours:

    - serial:: the reference loops.
    - omp::    OpenMP versions that split the *output* entries across threads
               and never split a reduction.  Every output entry therefore sees
               exactly the same sequence of floating-point operations as in the
               serial kernel, and the results are bit-identical regardless of
               the thread count.

    The free functions at namespace scope dispatch to omp:: when the library
    was built with OpenMP and the problem is large enough to amortise a
    parallel region, and to serial:: otherwise.
 */

namespace bgs::kernels {

namespace serial {
/// C = A^T B.  A is m x a, B is m x b, C is a x b.
void gemm_tn(ConstMatView a, ConstMatView b, MatView c);
/// C -= A B.  A is m x k, B is k x n, C is m x n.
void gemm_nn_sub(ConstMatView a, ConstMatView b, MatView c);
/// C = A B.
void gemm_nn(ConstMatView a, ConstMatView b, MatView c);
} // namespace serial

namespace omp {
void gemm_tn(ConstMatView a, ConstMatView b, MatView c);
void gemm_nn_sub(ConstMatView a, ConstMatView b, MatView c);
void gemm_nn(ConstMatView a, ConstMatView b, MatView c);
} // namespace omp

/// True when the omp:: kernels actually run in parallel (built with OpenMP).
bool parallel_enabled();

/// A^T B as a new matrix.
DenseMatrix inner(ConstMatView a, ConstMatView b);
/// C -= A B in place.
void subtract_product(MatView c, ConstMatView a, ConstMatView b);
/// A B as a new matrix.
DenseMatrix product(ConstMatView a, ConstMatView b);

} // namespace bgs::kernels
