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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldpn/acq.hpp"
#include "ldpn/model.hpp"

namespace ldpn {

struct ReduceOptions {
  // Source configuration whose annotated copies are the roots. Defaults to
  // the model's initial configuration.
  std::optional<LocalConfiguration> query;
  // Build every control P x AS and every rule instead of the fragment
  // reachable from the roots.
  bool full_materialization = false;
  // Only annotate with structures a real subtree can have: R within X, every
  // lock within the locks the control can still touch, RH within U x R and
  // AH within A x U. Keeps every run that tells the truth about its future.
  bool honest_pruning = true;
  bool parallel = true;
  std::size_t max_controls = 500000;
  std::size_t max_rules = 5000000;
  std::size_t lock_limit = kDefaultEnumerationLockLimit;
};

struct ReducedControl {
  ControlId source = 0;
  AcquisitionStructure as;
};

struct ReducedRuleOrigin {
  std::uint32_t source_rule = 0;
  AcquisitionStructure before;  // annotation of the rule's source control
  AcquisitionStructure after;   // annotation of the continuation
  std::optional<AcquisitionStructure> spawned;
};

struct ReductionStats {
  double structure_space = 1;  // |AS| for the model's lock count
  std::size_t roots = 0;
  std::size_t controls = 0;
  std::size_t rules = 0;
  std::size_t discarded_undefined = 0;     // transformer guard failed
  std::size_t discarded_inconsistent = 0;  // predecessor not consistent
  std::size_t discarded_incompatible = 0;  // spawn pair not compatible
  std::vector<std::size_t> controls_per_dpds;
  std::vector<std::size_t> rules_per_dpds;
};

// Lock-free DPN over controls P x AS with every rule labelled tau.
struct ReducedDpn {
  LockDpnModel dpn;
  std::vector<ReducedControl> origin;          // per control of `dpn`
  std::vector<ReducedRuleOrigin> rule_origin;  // per rule of `dpn`
  std::vector<ControlId> roots;                // (p0, as) with as_X = L0
  ReductionStats stats;
};

ReducedDpn reduce_ldpn(const LockDpnModel& model, const ReduceOptions& options = {});

// Every M with transform(M) == after, where transform is the identity (tau),
// rel_update or acq_update. M is not required to be consistent.
std::vector<AcquisitionStructure> transformer_preimages(
    const AcquisitionStructure& after, const Action& action,
    std::size_t lock_count);

// Locks in actions of rules reachable from each control, spawns included.
std::vector<LockSet> lock_footprints(const LockDpnModel& model);

bool is_honest(const AcquisitionStructure& as, LockSet footprint);

// lambda'(ap) = {(p, as) : (p, as_X) in lambda(ap)}; regular automata are kept
// and their initial states re-keyed by the annotated controls.
Valuation lift_valuation(const LockDpnModel& source,
                         const std::vector<ReducedControl>& origin);

// ((p, as), w) -> (p w, as_X)
LocalConfiguration project_config(const ReducedDpn& reduced,
                                  const LocalConfiguration& config);

// Table from reduced control names to their source control and structure.
std::string reduction_sidecar(const LockDpnModel& source,
                              const ReducedDpn& reduced);

}  // namespace ldpn
