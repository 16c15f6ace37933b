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

#include "bgs/kernels.hpp"
#include "bgs/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace bgs {

std::string_view skeleton_name(SkeletonKind kind) {
  switch (kind) {
  case SkeletonKind::BCGS:
    return "BCGS";
  case SkeletonKind::BCGS_A:
    return "BCGS-A";
  case SkeletonKind::BCGSI_PLUS:
    return "BCGSI+";
  case SkeletonKind::BCGSI_PLUS_A:
    return "BCGSI+A";
  case SkeletonKind::BCGSI_A_3S:
    return "BCGSI+A-3S";
  case SkeletonKind::BCGSI_A_2S:
    return "BCGSI+A-2S";
  case SkeletonKind::BCGSI_A_1S:
    return "BCGSI+A-1S";
  }
  return "?";
}

std::optional<SkeletonKind> parse_skeleton(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "bcgs")
    return SkeletonKind::BCGS;
  if (t == "bcgs-a" || t == "bcgsa")
    return SkeletonKind::BCGS_A;
  if (t == "bcgsi+" || t == "bcgsi-plus")
    return SkeletonKind::BCGSI_PLUS;
  if (t == "bcgsi+a" || t == "bcgsi-plus-a")
    return SkeletonKind::BCGSI_PLUS_A;
  if (t == "3s" || t == "bcgsi+a-3s")
    return SkeletonKind::BCGSI_A_3S;
  if (t == "2s" || t == "bcgsi+a-2s")
    return SkeletonKind::BCGSI_A_2S;
  if (t == "1s" || t == "bcgsi+a-1s")
    return SkeletonKind::BCGSI_A_1S;
  return std::nullopt;
}

namespace {

// Shared state of one skeleton run.  Blocks are 0-based here; ledger and
// trace entries use j + 1.
class Run {
public:
  Run(const BlockMatrix &x, const SkeletonOptions &opts)
      : x_(x), m_(x.rows()), s_(x.block_width()), p_(x.block_count()), q_(m_, p_ * s_), r_(p_ * s_, p_ * s_) {
    if (opts.trace) {
      trace_.emplace();
      trace_->steps.resize(p_);
      for (std::size_t j = 0; j < p_; ++j)
        trace_->steps[j].block = j + 1;
    }
  }

  std::size_t blocks() const { return p_; }
  std::size_t width() const { return s_; }
  std::size_t rows() const { return m_; }
  ConstMatView x_block(std::size_t j) const { return x_.block(j); }
  /// Columns of the first `j` blocks of Q.
  ConstMatView basis(std::size_t j) const { return q_.view().col_range(0, j * s_); }
  MatView q_block(std::size_t j) { return q_.view().col_range(j * s_, s_); }

  SyncLedger &ledger() { return ledger_; }
  BlockStep *step(std::size_t j) { return trace_ ? &trace_->steps[j] : nullptr; }

  /// basis(j)^T W as one global reduction charged to `charge_to` (1-based).
  DenseMatrix project(std::size_t j, ConstMatView w, std::size_t charge_to, const char *label) {
    ledger_.record(charge_to, label, 1);
    return kernels::inner(basis(j), w);
  }

  /// W - basis(j) C.
  DenseMatrix deflate(ConstMatView w, std::size_t j, const DenseMatrix &coeff) {
    DenseMatrix out(w);
    if (j > 0)
      kernels::subtract_product(out.view(), basis(j), coeff);
    return out;
  }

  void set_q(std::size_t j, const DenseMatrix &qj) { q_.set_block(0, j * s_, qj); }
  void set_r_col(std::size_t j, const DenseMatrix &col) { r_.set_block(0, j * s_, col); }
  /// Upper triangle only: products of triangular factors can carry NaN
  /// below the diagonal after a breakdown.
  void set_r_diag(std::size_t j, ConstMatView rjj) {
    for (std::size_t c = 0; c < s_; ++c)
      for (std::size_t i = 0; i <= c; ++i)
        r_(j * s_ + i, j * s_ + c) = rjj(i, c);
  }

  /// Runs a muscle on block j, storing Q_j and returning its R factor.
  DenseMatrix intraortho(const IOSpec &io, ConstMatView w, std::size_t j, bool store_q = true) {
    QROutput out = apply_io(io, w, ledger_, j + 1);
    failed_ = failed_ || out.failed;
    if (store_q)
      set_q(j, out.q);
    last_q_ = std::move(out.q);
    return out.r.dense();
  }
  DenseMatrix take_last_q() { return std::move(last_q_); }

  void mark_failed() { failed_ = true; }

  BGSResult finish() {
    if (trace_)
      for (auto &st : trace_->steps)
        st.sync_events = ledger_.events_for_block(st.block);
    // Only upper-triangular entries were ever written; the factor is
    // block upper triangular with upper-triangular diagonal blocks.
    return {BlockMatrix(std::move(q_), s_), UpperTriangular(std::move(r_)), std::move(trace_), std::move(ledger_),
            failed_};
  }

private:
  const BlockMatrix &x_;
  std::size_t m_;
  std::size_t s_;
  std::size_t p_;
  DenseMatrix q_;
  DenseMatrix r_;
  DenseMatrix last_q_;
  SyncLedger ledger_;
  std::optional<IterationTrace> trace_;
  bool failed_ = false;
};

template <class T> void keep(std::optional<DenseMatrix> BlockStep::*field, BlockStep *st, T &&value) {
  if (st)
    st->*field = DenseMatrix(std::forward<T>(value));
}

bool usable_factor(const DenseMatrix &r) {
  if (!r.all_finite())
    return false;
  for (std::size_t i = 0; i < r.rows(); ++i)
    if (r(i, i) == 0.0)
      return false;
  return true;
}

// Cholesky-based second normalization shared by 2S and 1S:
// Y_kk = chol(Omega - Y^T Y), Q_k = (V_k - Q_{k-1} Y) Y_kk^{-1}.
DenseMatrix fused_cholqr(Run &run, std::size_t j, ConstMatView v, const DenseMatrix &y, const DenseMatrix &omega) {
  const DenseMatrix gram = omega - kernels::inner(y, y);
  CholResult chol = chol_free(gram);
  if (chol.failed) {
    run.mark_failed();
    run.set_q(j, nan_matrix(run.rows(), run.width()));
    return chol.r.dense();
  }
  const DenseMatrix w = run.deflate(v, j, y);
  run.set_q(j, tri_solve_right(w, chol.r));
  return chol.r.dense();
}

} // namespace

BGSResult bcgs_a(const BlockMatrix &x, const IOSpec &io_a, const IOSpec &io, const SkeletonOptions &opts) {
  Run run(x, opts);
  run.set_r_diag(0, run.intraortho(io_a, x.block(0), 0));
  for (std::size_t j = 1; j < run.blocks(); ++j) {
    const DenseMatrix rcol = run.project(j, x.block(j), j + 1, "proj");
    const DenseMatrix w = run.deflate(x.block(j), j, rcol);
    run.set_r_diag(j, run.intraortho(io, w, j));
    run.set_r_col(j, rcol);
    keep(&BlockStep::s_col, run.step(j), rcol);
  }
  return run.finish();
}

BGSResult bcgs(const BlockMatrix &x, const IOSpec &io, const SkeletonOptions &opts) { return bcgs_a(x, io, io, opts); }

BGSResult bcgsi_plus_a(const BlockMatrix &x, const IOSpec &io_a, const IOSpec &io1, const IOSpec &io2,
                       const SkeletonOptions &opts) {
  Run run(x, opts);
  run.set_r_diag(0, run.intraortho(io_a, x.block(0), 0));
  for (std::size_t j = 1; j < run.blocks(); ++j) {
    BlockStep *st = run.step(j);
    // first projection and intraortho
    const DenseMatrix scol = run.project(j, x.block(j), j + 1, "proj");
    const DenseMatrix w1 = run.deflate(x.block(j), j, scol);
    const DenseMatrix skk = run.intraortho(io1, w1, j, false);
    const DenseMatrix u = run.take_last_q();
    // second projection and intraortho
    const DenseMatrix tcol = run.project(j, u, j + 1, "proj");
    const DenseMatrix w2 = run.deflate(u, j, tcol);
    const DenseMatrix tkk = run.intraortho(io2, w2, j);
    // R_{1:k-1,k} = S + T S_kk,  R_kk = T_kk S_kk
    run.set_r_col(j, scol + kernels::product(tcol, skk));
    run.set_r_diag(j, kernels::product(tkk, skk));
    keep(&BlockStep::s_col, st, scol);
    keep(&BlockStep::s_diag, st, skk);
    keep(&BlockStep::t_col, st, tcol);
    keep(&BlockStep::u_block, st, u);
  }
  return run.finish();
}

BGSResult bcgsi_plus(const BlockMatrix &x, const IOSpec &io, const SkeletonOptions &opts) {
  return bcgsi_plus_a(x, io, io, io, opts);
}

BGSResult bcgsi_a_3s(const BlockMatrix &x, const IOSpec &io_a, const IOSpec &io, const SkeletonOptions &opts) {
  Run run(x, opts);
  run.set_r_diag(0, run.intraortho(io_a, x.block(0), 0));
  for (std::size_t j = 1; j < run.blocks(); ++j) {
    BlockStep *st = run.step(j);
    const DenseMatrix scol = run.project(j, x.block(j), j + 1, "proj");
    const DenseMatrix v = run.deflate(x.block(j), j, scol); // normalization skipped
    const DenseMatrix ycol = run.project(j, v, j + 1, "proj");
    const DenseMatrix w = run.deflate(v, j, ycol);
    run.set_r_diag(j, run.intraortho(io, w, j));
    run.set_r_col(j, scol + ycol);
    keep(&BlockStep::s_col, st, scol);
    keep(&BlockStep::y_col, st, ycol);
    keep(&BlockStep::v_block, st, v);
  }
  return run.finish();
}

BGSResult bcgsi_a_2s(const BlockMatrix &x, const IOSpec &io_a, const SkeletonOptions &opts) {
  Run run(x, opts);
  const std::size_t s = run.width();
  run.set_r_diag(0, run.intraortho(io_a, x.block(0), 0));
  for (std::size_t j = 1; j < run.blocks(); ++j) {
    BlockStep *st = run.step(j);
    const DenseMatrix scol = run.project(j, x.block(j), j + 1, "proj");
    const DenseMatrix v = run.deflate(x.block(j), j, scol);

    // [Q_{k-1}, V_k]^T V_k in one reduction: V_k is parked in the slot of Q_k.
    run.set_q(j, v);
    run.ledger().record(j + 1, "batch", 1);
    const DenseMatrix prod = kernels::inner(run.basis(j + 1), v);
    const DenseMatrix ycol = prod.block(0, 0, j * s, s);
    const DenseMatrix omega = prod.block(j * s, 0, s, s);

    run.set_r_diag(j, fused_cholqr(run, j, v, ycol, omega));
    run.set_r_col(j, scol + ycol);
    keep(&BlockStep::s_col, st, scol);
    keep(&BlockStep::y_col, st, ycol);
    keep(&BlockStep::omega, st, omega);
    keep(&BlockStep::v_block, st, v);
  }
  return run.finish();
}

BGSResult bcgsi_a_1s(const BlockMatrix &x, const IOSpec &io_a, const SkeletonOptions &opts) {
  Run run(x, opts);
  const std::size_t s = run.width();
  const std::size_t p = run.blocks();
  run.set_r_diag(0, run.intraortho(io_a, x.block(0), 0));
  if (p == 1)
    return run.finish();

  // Steps 2.1.1 and 2.1.2', pulled out of the loop.
  DenseMatrix scol = run.project(1, x.block(1), 2, "proj");
  DenseMatrix v = run.deflate(x.block(1), 1, scol);

  // Loop over k = 2 .. p-1 (0-based j = 1 .. p-2).  The batched product of
  // iteration k serves block k's second projection and block k+1's first
  // one; it is charged to block k+1 so that every interior block carries
  // exactly one reduction.
  for (std::size_t j = 1; j + 1 < p; ++j) {
    BlockStep *st = run.step(j);
    run.set_q(j, v);
    DenseMatrix rhs(run.rows(), 2 * s);
    rhs.set_block(0, 0, v);
    rhs.set_block(0, s, x.block(j + 1));
    run.ledger().record(j + 2, "batch", 1);
    const DenseMatrix prod = kernels::inner(run.basis(j + 1), rhs);
    const DenseMatrix ycol = prod.block(0, 0, j * s, s);
    const DenseMatrix z = prod.block(0, s, j * s, s);
    const DenseMatrix omega = prod.block(j * s, 0, s, s);
    const DenseMatrix pk = prod.block(j * s, s, s, s);

    const DenseMatrix ykk = fused_cholqr(run, j, v, ycol, omega);
    run.set_r_diag(j, ykk);
    run.set_r_col(j, scol + ycol);

    keep(&BlockStep::s_col, st, scol);
    keep(&BlockStep::y_col, st, ycol);
    keep(&BlockStep::omega, st, omega);
    keep(&BlockStep::z_block, st, z);
    keep(&BlockStep::p_block, st, pk);
    keep(&BlockStep::v_block, st, v);

    // Reverse-engineer S_{1:k,k+1} = [Z; Y_kk^{-T} (P_k - Y^T Z)].
    DenseMatrix next(j * s + s, s);
    next.set_block(0, 0, z);
    if (usable_factor(ykk))
      next.set_block(j * s, 0, tri_solve_left_transposed(UpperTriangular(ykk), pk - kernels::inner(ycol, z)));
    else
      next.set_block(j * s, 0, nan_matrix(s, s));
    scol = std::move(next);
    v = run.deflate(x.block(j + 1), j + 1, scol);
  }

  // Final step p.
  const std::size_t j = p - 1;
  BlockStep *st = run.step(j);
  run.set_q(j, v);
  run.ledger().record(p, "batch", 1);
  const DenseMatrix prod = kernels::inner(run.basis(p), v);
  const DenseMatrix ycol = prod.block(0, 0, j * s, s);
  const DenseMatrix omega = prod.block(j * s, 0, s, s);
  run.set_r_diag(j, fused_cholqr(run, j, v, ycol, omega));
  run.set_r_col(j, scol + ycol);
  keep(&BlockStep::s_col, st, scol);
  keep(&BlockStep::y_col, st, ycol);
  keep(&BlockStep::omega, st, omega);
  keep(&BlockStep::v_block, st, v);
  return run.finish();
}

} // namespace bgs
