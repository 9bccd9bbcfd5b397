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

#include <string>

#include "ldpn/buchi.hpp"
#include "ldpn/model.hpp"
#include "ldpn/reduce.hpp"
#include "ldpn/run_tree.hpp"

namespace ldpn {

// Graphviz renderings. Node and edge order follows ids, so output is stable.
std::string buchi_to_dot(const BuchiAutomaton& automaton);
std::string ma_to_dot(const MultiAutomaton& automaton, const LockDpnModel& model);
// Control-flow view of a model: one node per control, one edge per rule.
std::string model_to_dot(const LockDpnModel& model);
std::string reduced_to_dot(const ReducedDpn& reduced);
// Right edges continue the instance, dashed left edges start a spawned one;
// every edge carries the action of the rule that expanded its source.
std::string run_tree_to_dot(const GlobalRunTree& tree, const LockDpnModel& model);

}  // namespace ldpn
