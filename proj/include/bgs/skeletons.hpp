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
#include "bgs/muscles.hpp"
#include "bgs/sync_ledger.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

/** @file Block classical Gram-Schmidt skeletons.

    All skeletons take a block matrix X = [X_1 ... X_p] (m x ps, blocks of
    width s) and return Q with the same partition and an upper-triangular R
    with X ~ Q R.  They differ in how many times each block is projected
    against the basis built so far and in how the inner products are batched:

      BCGS / BCGS-A        project once, then IO                 2 syncs/block
      BCGSI+ / BCGSI+A     project, IO_1, project, IO_2          4
      BCGSI+A-3S           project, project, IO (first IO skipped) 3
      BCGSI+A-2S           3S with CholQR fused into one batch   2
      BCGSI+A-1S           2S with the loop window shifted       1

    (sync counts are steady-state, with CholQR as the muscle).  The "-A"
    variants orthogonalize the first block with a separate, typically
    stronger routine IO_A.  BCGS and BCGSI+ are BCGS-A and BCGSI+A with all
    routines tied and run through the same code.

    Block indices in the ledger and the trace are 1-based to match the usual
    statement of these algorithms.  Once a Cholesky factorization fails the
    run keeps going with NaN data and the result is flagged.
 */

namespace bgs {

enum class SkeletonKind : std::uint8_t {
  BCGS,
  BCGS_A,
  BCGSI_PLUS,
  BCGSI_PLUS_A,
  BCGSI_A_3S,
  BCGSI_A_2S,
  BCGSI_A_1S,
};

inline constexpr SkeletonKind kAllSkeletons[] = {
    SkeletonKind::BCGS,       SkeletonKind::BCGS_A,     SkeletonKind::BCGSI_PLUS, SkeletonKind::BCGSI_PLUS_A,
    SkeletonKind::BCGSI_A_3S, SkeletonKind::BCGSI_A_2S, SkeletonKind::BCGSI_A_1S,
};

/// Canonical names: BCGS, BCGS-A, BCGSI+, BCGSI+A, BCGSI+A-3S, BCGSI+A-2S, BCGSI+A-1S.
std::string_view skeleton_name(SkeletonKind kind);
/// Accepts canonical names and the short forms bcgs, bcgs-a, bcgsi+, bcgsi+a,
/// 3s, 2s, 1s (case-insensitive).
std::optional<SkeletonKind> parse_skeleton(std::string_view text);

/// Intermediate quantities of one block column.  Which members are set
/// depends on the skeleton.
struct BlockStep {
  std::size_t block = 0;                  // 1-based
  std::optional<DenseMatrix> s_col;       // first projection coefficients S_{1:k-1,k}
  std::optional<DenseMatrix> s_diag;      // S_kk from IO_1 (BCGSI+A)
  std::optional<DenseMatrix> t_col;       // second projection T_{1:k-1,k} (BCGSI+A)
  std::optional<DenseMatrix> y_col;       // second projection Y_{1:k-1,k} (3S/2S/1S)
  std::optional<DenseMatrix> omega;       // V_k^T V_k (2S/1S)
  std::optional<DenseMatrix> z_block;     // Q_{k-1}^T X_{k+1} (1S)
  std::optional<DenseMatrix> p_block;     // V_k^T X_{k+1} (1S)
  std::optional<DenseMatrix> u_block;     // U_k (BCGSI+A)
  std::optional<DenseMatrix> v_block;     // V_k (3S/2S/1S)
  std::vector<SyncEvent> sync_events;
};

struct IterationTrace {
  std::vector<BlockStep> steps; // steps[k-1] describes block k

  const BlockStep &step(std::size_t block) const { return steps.at(block - 1); }
};

struct SkeletonOptions {
  /// Capture per-block intermediates; off by default to keep memory at Q, R.
  bool trace = false;
};

struct BGSResult {
  BlockMatrix q;
  UpperTriangular r;
  std::optional<IterationTrace> trace;
  SyncLedger ledger;
  bool failed = false;
};

BGSResult bcgs(const BlockMatrix &x, const IOSpec &io, const SkeletonOptions &opts = {});
BGSResult bcgs_a(const BlockMatrix &x, const IOSpec &io_a, const IOSpec &io, const SkeletonOptions &opts = {});
BGSResult bcgsi_plus(const BlockMatrix &x, const IOSpec &io, const SkeletonOptions &opts = {});
BGSResult bcgsi_plus_a(const BlockMatrix &x, const IOSpec &io_a, const IOSpec &io1, const IOSpec &io2,
                       const SkeletonOptions &opts = {});
BGSResult bcgsi_a_3s(const BlockMatrix &x, const IOSpec &io_a, const IOSpec &io, const SkeletonOptions &opts = {});
BGSResult bcgsi_a_2s(const BlockMatrix &x, const IOSpec &io_a, const SkeletonOptions &opts = {});
BGSResult bcgsi_a_1s(const BlockMatrix &x, const IOSpec &io_a, const SkeletonOptions &opts = {});

} // namespace bgs
