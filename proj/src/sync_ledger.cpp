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

#include "bgs/sync_ledger.hpp"

#include "bgs/dense.hpp"

namespace bgs {

void SyncLedger::record(std::size_t block, std::string label, std::size_t cost) {
  if (cost == 0)
    throw Error("sync event cost must be at least 1");
  events_.push_back({block, std::move(label), cost});
  total_ += cost;
}

std::size_t SyncLedger::total_for_block(std::size_t block) const {
  std::size_t sum = 0;
  for (const auto &ev : events_)
    if (ev.block == block)
      sum += ev.cost;
  return sum;
}

std::vector<SyncEvent> SyncLedger::events_for_block(std::size_t block) const {
  std::vector<SyncEvent> out;
  for (const auto &ev : events_)
    if (ev.block == block)
      out.push_back(ev);
  return out;
}

} // namespace bgs
