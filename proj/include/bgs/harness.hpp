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

#include "bgs/matgen.hpp"
#include "bgs/muscles.hpp"
#include "bgs/skeletons.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

/** @file Stability sweeps: run skeleton/IO combinations over a range of
    condition numbers and record one CSV row per (kappa point, combination).
 */

namespace bgs {

/// Bad user input (wrong arity, unparsable value, empty sweep).  The CLI
/// maps it to exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// One skeleton with its routines.  Which IO fields must be set depends on
/// the skeleton:
///
///   BCGS, BCGSI+      io_a only (io1/io2 may repeat it)
///   BCGS-A, 3S        io_a and io1
///   BCGSI+A           io_a, io1, io2
///   2S, 1S            io_a only
struct Combo {
  SkeletonKind skeleton = SkeletonKind::BCGSI_PLUS_A;
  IOKind io_a = IOKind::HouseQR;
  std::optional<IOKind> io1;
  std::optional<IOKind> io2;

  friend bool operator==(const Combo &, const Combo &) = default;
};

/// Throws ConfigError when the IO fields do not fit the skeleton.
void validate_combo(const Combo &combo);
/// Runs the skeleton of `combo` on `x`.
BGSResult run_combo(const BlockMatrix &x, const Combo &combo, const SkeletonOptions &opts = {});

/// The seven combinations of the standard roadmap: BCGS and BCGSI+ with
/// CholQR, the "-A" variants with HouseQR for the first block and CholQR in
/// the loop.
std::vector<Combo> roadmap_combos();

struct RunRecord {
  std::string matrix_class;
  std::size_t m = 0;
  std::size_t p = 0;
  std::size_t s = 0;
  double kappa_target = 0.0;
  double kappa_actual = 0.0;
  SkeletonKind skeleton = SkeletonKind::BCGS;
  /// IO columns as written to the CSV; aliases are expanded (BCGS fills
  /// io_a and io1, BCGSI+ all three).
  std::optional<IOKind> io_a;
  std::optional<IOKind> io1;
  std::optional<IOKind> io2;
  double loo = 0.0;
  double rel_res = 0.0;
  double rel_chol_res = 0.0;
  double sync_per_block = 0.0;
  bool failed = false;
  double elapsed_ms = 0.0;

  // Not serialized.
  std::uint64_t matrix_hash = 0;
  std::string note;
};

/// FNV-1a over the dimensions and the raw bytes of the entries.
std::uint64_t content_hash(const DenseMatrix &a);

/// Executes `combo` on `x` and fills every metric.  kappa_actual is cond_2(x)
/// unless `kappa_actual` is given.  elapsed_ms stays 0 unless `timing`.
/// Numerical breakdown (a failed Cholesky factor, a rank deficient MGS
/// block) gives failed = true; configuration errors throw ConfigError.
RunRecord run_single(const BlockMatrix &x, const Combo &combo, bool timing = false,
                     std::optional<double> kappa_actual = std::nullopt);

struct SweepConfig {
  /// Class, dimensions, seed and class knobs.  The swept knob is overwritten
  /// per point.
  MatrixClassSpec matrix;
  std::vector<Combo> combos;
  /// Target condition numbers.  default: required.  piled: required, each
  /// one calibrated.  monomial: mapped to the closest panel length t.
  std::vector<double> kappas;
  /// monomial only: explicit panel lengths (divisors of p s).  When neither
  /// this nor `kappas` is given every divisor is swept.
  std::vector<std::size_t> t_values;
  std::string out;
  /// Write `<out>.trace.csv` with the matrix hash each record consumed.
  bool trace = false;
  /// Fill elapsed_ms; off by default so repeated sweeps are byte-identical.
  bool timing = false;
};

/// Log-spaced list from lo to hi inclusive.
std::vector<double> kappa_range(double lo, double hi, std::size_t count);

void validate_sweep(const SweepConfig &config);

/// Records in (kappa point, combo) order.  Points run concurrently under
/// OpenMP; the output order does not depend on the schedule.
std::vector<RunRecord> run_sweep(const SweepConfig &config);

inline constexpr const char *kCsvHeader = "matrix_class,m,p,s,kappa_target,kappa_actual,skeleton,io_a,io1,io2,"
                                          "loo,rel_res,rel_chol_res,sync_per_block,failed,elapsed_ms";

std::string to_csv_row(const RunRecord &record);
void write_csv(std::ostream &out, const std::vector<RunRecord> &records);
/// Throws Error naming `path` on I/O failure.
void write_csv(const std::vector<RunRecord> &records, const std::string &path);
/// Per-record trace: kappa index, combo index, skeleton, matrix hash.
void write_trace_csv(const std::vector<RunRecord> &records, std::size_t combos_per_point, const std::string &path);

std::vector<RunRecord> read_csv(std::istream &in);
std::vector<RunRecord> read_csv(const std::string &path);

struct BoundViolation {
  std::size_t row = 0; // 0-based data row
  double loo = 0.0;
  double bound = 0.0;
};

/// Rows whose envelope applies at kappa_actual and whose loo exceeds the
/// bound.  A failed run in an applicable row counts as a violation.
std::vector<BoundViolation> check_bounds(const std::vector<RunRecord> &records);

} // namespace bgs
