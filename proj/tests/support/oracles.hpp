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
#include <random>
#include <string>
#include <vector>

#include "ldpn/acq.hpp"
#include "ldpn/buchi.hpp"
#include "ldpn/dpn_mc.hpp"
#include "ldpn/ltl.hpp"
#include "ldpn/model.hpp"

namespace ldpn::testing {

// Truth of f at position 0 of stem·loop^ω, evaluated on the finitely many
// positions of the lasso. Letters are bit sets over `props`.
bool lasso_holds(const LtlFormula& f, const std::vector<std::string>& props,
                 const std::vector<PropSet>& stem, const std::vector<PropSet>& loop);

// Random formula with at most `temporal` temporal operators (X, F, G, U, R)
// and at most `boolean` boolean connectives.
LtlFormula random_formula(std::mt19937& rng, const std::vector<std::string>& props,
                          std::size_t temporal, std::size_t boolean = 2);

std::vector<PropSet> random_word(std::mt19937& rng, std::size_t length,
                                 std::size_t prop_count);

// Every (R, RH, U, AH, A, X) over n locks, graphs including self loops,
// filtered by is_consistent.
std::vector<AcquisitionStructure> brute_force_structures(std::size_t n);

AcquisitionStructure random_structure(std::mt19937& rng, std::size_t n);

// Rule tables 1.1-1.3 and 2.1-2.3 transcribed component by component: the
// source annotation for continuation `cont` (and spawned `child`).
std::optional<AcquisitionStructure> literal_rule1(const AcquisitionStructure& cont,
                                                  const Action& a);
std::optional<AcquisitionStructure> literal_rule2(const AcquisitionStructure& cont,
                                                  const AcquisitionStructure& child,
                                                  const Action& a);

// Single lock-free PDS, no spawns. Props "a" and "b" hold on random controls.
struct PdsShape {
  std::size_t max_controls = 3;
  std::size_t max_symbols = 3;
  std::size_t max_rules = 6;
};
LockDpnModel random_pds(std::mt19937& rng, const PdsShape& shape = {});

// Lock-free DPN with three systems M, C, G and at most three DCLICs. M and C
// only move forward through their controls when they spawn, so every run has
// finitely many instances.
LockDpnModel random_dpn(std::mt19937& rng);

// Explicit search over product configurations with stacks of height at most
// `bound`. Spawns outside `allowed` are disabled. nullopt when a reachable
// configuration needs a higher stack.
std::optional<std::vector<Head>> explicit_repeating_heads(const BuchiDpds& b,
                                                          const DclicMask& allowed,
                                                          std::size_t bound);
std::optional<bool> explicit_reaches_heads(const BuchiDpds& b, std::uint32_t control,
                                           const Stack& stack,
                                           const std::vector<Head>& heads,
                                           const DclicMask& allowed,
                                           std::size_t bound);

// Every D labelling some accepting path of the automaton on the input,
// found by walking all paths.
std::vector<DclicSet> brute_force_ma_accepts(const MultiAutomaton& a, ControlId control,
                                             LockSet locks, const Stack& stack);

}  // namespace ldpn::testing
