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
#include "bgs/sync_ledger.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

/** @file Intraorthogonalization ("muscle") routines.

    Each routine maps one m x s block vector X to a pair (Q, R) with
    X ~ Q R, Q having s columns and R upper triangular with a nonnegative
    diagonal.  The routines differ in how far Q drifts from orthonormality as
    kappa(X) grows:

      HouseQR, GivensQR   ||I - Q^T Q|| = O(eps)
      MGS                 ||I - Q^T Q|| = O(eps) kappa(X)
      CholQR              ||I - Q^T Q|| = O(eps) kappa(X)^2

    and all of them have an O(eps) relative residual.
 */

namespace bgs {

enum class IOKind : std::uint8_t { HouseQR, GivensQR, MGS, CholQR };

/// An intraorthogonalization choice plus its stability/cost metadata.
struct IOSpec {
  IOKind kind = IOKind::HouseQR;

  /// Exponent of kappa in the LOO of this routine.
  int alpha() const;
  /// Global reductions per call on an m x s block: 1 for CholQR (its Gram
  /// product), s for the column-at-a-time routines.
  std::size_t sync_cost(std::size_t block_width) const;
  /// All four routines have an O(eps) relative residual.
  static constexpr std::string_view rho_class = "O(eps)";

  std::string_view name() const;

  friend bool operator==(const IOSpec &, const IOSpec &) = default;
};

inline constexpr IOSpec kHouseQR{IOKind::HouseQR};
inline constexpr IOSpec kGivensQR{IOKind::GivensQR};
inline constexpr IOSpec kMGS{IOKind::MGS};
inline constexpr IOSpec kCholQR{IOKind::CholQR};

std::string_view io_name(IOKind kind);
/// Accepts "HouseQR"/"houseqr", "GivensQR", "MGS", "CholQR" in any case.
std::optional<IOKind> parse_io(std::string_view text);

struct QROutput {
  DenseMatrix q;
  UpperTriangular r;
  /// Only CholQR can fail; q and r then hold NaN.
  bool failed = false;
};

struct CholResult {
  UpperTriangular r;
  bool failed = false;
};

QROutput house_qr(ConstMatView x);
QROutput givens_qr(ConstMatView x);
/// Throws "rank deficient block" on an exactly zero pivot.
QROutput mgs_qr(ConstMatView x);

/// Right-looking Cholesky G = R^T R with no positive-definiteness guard.
/// G is symmetrized first.  A negative pivot turns into NaN through the
/// square root and the factorization keeps going; `failed` is set when the
/// factor ends up with a non-finite entry or a zero pivot.
CholResult chol_free(const DenseMatrix &g);

/// G = X^T X, R = chol_free(G), Q = X R^{-1}.
QROutput chol_qr(ConstMatView x);

/// Runs the routine named by `spec` and charges its sync cost to `block`.
QROutput apply_io(const IOSpec &spec, ConstMatView x, SyncLedger &ledger, std::size_t block);

} // namespace bgs
