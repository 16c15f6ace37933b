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

#include "bgs/skeletons.hpp"

#include <cstdint>
#include <vector>

namespace bgs {

/// Steady-state sync points per block column: the reductions charged to
/// blocks 2 .. p-1 divided by p - 2.  The first block (IO_A only) and the
/// last one (1S finishes with an extra product) are boundary effects and
/// are left out.  Throws "steady state undefined" for p < 3.
double syncs_per_block(const BGSResult &result);

struct SyncTableRow {
  SkeletonKind skeleton;
  double syncs_per_block;
  std::size_t total;
};

/// Runs every skeleton once on a default-class m x (p s) matrix with
/// CholQR-class muscles (HouseQR as IO_A for the "-A" variants, CholQR
/// everywhere else) and reads the counts off the live ledgers.
std::vector<SyncTableRow> sync_table(std::size_t m = 60, std::size_t p = 6, std::size_t s = 2,
                                     std::uint64_t seed = 42);

} // namespace bgs
