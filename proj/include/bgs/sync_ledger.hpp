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

#include <cstddef>
#include <string>
#include <vector>

namespace bgs {

/// One simulated global reduction (or a batch of `cost` of them) charged to
/// block column `block` (1-based, as in the algorithm listings).
struct SyncEvent {
  std::size_t block = 0;
  std::string label;
  std::size_t cost = 0;

  friend bool operator==(const SyncEvent &, const SyncEvent &) = default;
};

/// Append-only count of sync points.  Local work (s x s Cholesky, triangular
/// solves, small products) never appears here: only reductions over the
/// long row dimension do.
class SyncLedger {
public:
  /// Throws if cost is zero.
  void record(std::size_t block, std::string label, std::size_t cost = 1);

  const std::vector<SyncEvent> &events() const { return events_; }
  std::size_t total() const { return total_; }
  std::size_t total_for_block(std::size_t block) const;
  std::vector<SyncEvent> events_for_block(std::size_t block) const;

private:
  std::vector<SyncEvent> events_;
  std::size_t total_ = 0;
};

} // namespace bgs
