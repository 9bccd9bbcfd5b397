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
#include <vector>

#include "ldpn/ltl.hpp"
#include "ldpn/model.hpp"

namespace ldpn {

struct OracleOptions {
  std::size_t stack_bound = 8;
  std::size_t instance_bound = 4;
  std::size_t max_states = 2'000'000;
  // Restrict to runs whose local runs use locks in a nested style.
  bool nested = true;
};

struct OracleResult {
  bool satisfied = false;
  std::size_t states = 0;
  std::size_t edges = 0;
  // Systems that never have an instance in the explored space; their formulas
  // impose nothing.
  std::vector<std::size_t> vacuous;
};

// Brute-force decision on the finite product of global configurations and
// per-instance automaton states: is there an infinite run in which every
// instance steps infinitely often and every instance's word satisfies the
// formula of its system? Throws ResourceLimit when a reachable configuration
// breaks a bound.
OracleResult explicit_buchi_oracle(const LockDpnModel& model,
                                   const std::vector<LtlFormula>& formulas,
                                   const GlobalConfiguration& start,
                                   const OracleOptions& options = {});

}  // namespace ldpn
