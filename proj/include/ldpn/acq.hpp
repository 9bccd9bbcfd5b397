// Copyright 2026 The ldpn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ldpn/lockset.hpp"

namespace ldpn {

// Summary of how a (sub)run uses locks. A structure annotating a node guesses
// the lock behaviour of the whole subtree rooted there.
struct AcquisitionStructure {
  LockSet initial_releases;      // R: releases with no earlier matching acq
  LockGraph release_graph;       // RH: (l, l') = usage of l before initial release of l'
  LockSet usages;                // U: matched acquire/release pairs
  LockGraph acquisition_graph;   // AH: (l, l') = usage of l' after final acquisition of l
  LockSet final_acquisitions;    // A: acquisitions never released
  LockSet initially_held;        // X: locks held at the root

  friend auto operator<=>(const AcquisitionStructure&,
                          const AcquisitionStructure&) = default;
};

struct AcquisitionStructureHash {
  std::size_t operator()(const AcquisitionStructure& as) const noexcept;
};

bool is_consistent(const AcquisitionStructure& as);

// Whether the two structures can describe sibling subtrees of one node.
// Throws std::invalid_argument when either argument is inconsistent.
bool compatible(const AcquisitionStructure& first,
                const AcquisitionStructure& second);

// Component-wise union of a continuation structure and a spawned-instance
// structure. Requires compatibility and an empty R and X on the spawn side.
AcquisitionStructure merge(const AcquisitionStructure& continuation,
                           const AcquisitionStructure& spawned);

// Predecessor structure across rel(l); nullopt when l is already held or
// already initially released afterwards.
std::optional<AcquisitionStructure> rel_update(
    const AcquisitionStructure& after, LockId lock);

// Predecessor structure across acq(l). Case 1 turns a pending initial release
// into a usage; otherwise case 2 records a final acquisition.
std::optional<AcquisitionStructure> acq_update(
    const AcquisitionStructure& after, LockId lock);

inline constexpr std::size_t kDefaultEnumerationLockLimit = 3;

// Every consistent structure over locks {0, ..., lock_count-1}, each once, in
// a fixed canonical order. Refuses lock counts above `limit` (ResourceLimit).
std::vector<AcquisitionStructure> enumerate_all(
    std::size_t lock_count,
    std::size_t limit = kDefaultEnumerationLockLimit);

// |AS| over `lock_count` locks: (labelled DAG count)^2 * 13^n. Exact as a
// double up to several locks; used for size bounds, not enumeration.
double structure_space_size(std::size_t lock_count);

// Sorted component listing, e.g. "R={} RH={} U={l2,l3} AH={(l1,l2)} A={l1} X={}".
std::string render(const AcquisitionStructure& as,
                   const std::vector<std::string>& lock_names);

// 32-bit FNV-1a of the canonical binary encoding, used for control names.
std::uint32_t fingerprint(const AcquisitionStructure& as);

}  // namespace ldpn
