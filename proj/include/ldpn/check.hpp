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
#include <optional>
#include <string>
#include <vector>

#include "ldpn/ltl.hpp"
#include "ldpn/model.hpp"
#include "ldpn/reduce.hpp"
#include "ldpn/regular.hpp"

namespace ldpn {

struct CheckRequest {
  std::vector<LtlFormula> formulas;  // one per DPDS
  // Start configuration (p0 w0, L0); defaults to the model's initial one.
  std::optional<LocalConfiguration> query;
  // Only count runs whose local runs use locks in a nested style. With at
  // most one lock every run qualifies and the pass is skipped.
  bool discipline = true;
  // Require every instance to release each lock it has promised to release.
  bool pending_fairness = true;
  bool parallel = true;
  bool full_materialization = false;
  bool honest_pruning = true;
  std::size_t max_controls = 500000;
  std::size_t max_rules = 5000000;
  std::size_t annotation_cap = kDefaultAnnotationCap;
};

struct CheckReport {
  // Some global run from the query satisfies every formula on every local
  // run. This is an existential statement about runs, not a safety proof.
  bool satisfied = false;
  std::optional<std::string> witness_root;  // reduced control that accepts
  std::vector<std::size_t> vacuous;  // systems that are never instantiated
  bool nesting_applied = false;
  std::size_t nesting_controls = 0;
  std::size_t nesting_dropped_rules = 0;
  ReductionStats reduction;
  std::size_t annotated_symbols = 0;
  std::size_t product_controls = 0;
  std::size_t product_rules = 0;
  std::size_t dclics = 0;
  std::vector<std::string> dfp;  // rendered members of D_fp
  std::size_t fixpoint_rounds = 0;
  double reduce_seconds = 0;
  double check_seconds = 0;
};

// Decides the formulas on the model. Simple and regular valuations are both
// accepted; regular ones go through stack annotation after the reduction.
CheckReport check_ldpn(const LockDpnModel& model, const CheckRequest& request);

// Same as check_ldpn; throws ValidationError unless the valuation is regular.
CheckReport check_ldpn_regular(const LockDpnModel& model,
                               const CheckRequest& request);

// Lock-free models only: the DPN engine run on the model as given.
bool check_dpn(const LockDpnModel& model, const std::vector<LtlFormula>& formulas,
               const LocalConfiguration& query, bool parallel = true);

// Systems with no instance in any run from `control`.
std::vector<std::size_t> vacuous_systems(const LockDpnModel& model,
                                         ControlId control);

inline constexpr const char* kPendingPropPrefix = "$pending_";

}  // namespace ldpn
