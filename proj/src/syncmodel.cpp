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

#include "bgs/syncmodel.hpp"

#include "bgs/matgen.hpp"

namespace bgs {

double syncs_per_block(const BGSResult &result) {
  const std::size_t p = result.q.block_count();
  if (p < 3)
    throw Error("steady state undefined");
  std::size_t interior = 0;
  for (std::size_t k = 2; k <= p - 1; ++k)
    interior += result.ledger.total_for_block(k);
  return static_cast<double>(interior) / static_cast<double>(p - 2);
}

std::vector<SyncTableRow> sync_table(std::size_t m, std::size_t p, std::size_t s, std::uint64_t seed) {
  MatrixClassSpec spec;
  spec.cls = MatrixClass::Default;
  spec.m = m;
  spec.p = p;
  spec.s = s;
  spec.seed = seed;
  spec.kappa = 10.0;
  const BlockMatrix x = gen_default(spec);

  std::vector<SyncTableRow> rows;
  for (SkeletonKind kind : kAllSkeletons) {
    BGSResult res;
    switch (kind) {
    case SkeletonKind::BCGS:
      res = bcgs(x, kCholQR);
      break;
    case SkeletonKind::BCGS_A:
      res = bcgs_a(x, kHouseQR, kCholQR);
      break;
    case SkeletonKind::BCGSI_PLUS:
      res = bcgsi_plus(x, kCholQR);
      break;
    case SkeletonKind::BCGSI_PLUS_A:
      res = bcgsi_plus_a(x, kHouseQR, kCholQR, kCholQR);
      break;
    case SkeletonKind::BCGSI_A_3S:
      res = bcgsi_a_3s(x, kHouseQR, kCholQR);
      break;
    case SkeletonKind::BCGSI_A_2S:
      res = bcgsi_a_2s(x, kHouseQR);
      break;
    case SkeletonKind::BCGSI_A_1S:
      res = bcgsi_a_1s(x, kHouseQR);
      break;
    }
    rows.push_back({kind, syncs_per_block(res), res.ledger.total()});
  }
  return rows;
}

} // namespace bgs
