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
#include <map>
#include <utility>
#include <optional>
#include <vector>

#include "ldpn/dpn_mc.hpp"
#include "ldpn/model.hpp"

namespace ldpn {

inline constexpr std::size_t kDefaultAnnotationCap = 4096;

// A DPN whose stack symbols also record, per proposition, the set of
// automaton states that accept the stack beneath them. Propositions of a
// regular valuation then depend only on the control and the top symbol.
struct RegularAnnotation {
  LockDpnModel dpn;  // annotated symbols; valuation left empty
  std::vector<Symbol> base_symbol;                 // per annotated symbol
  std::vector<std::uint32_t> below;                // tuple index, per annotated symbol
  std::vector<std::vector<std::uint64_t>> tuples;  // state sets, per tuple, per prop
  // [prop][control]: initial automaton states as a bit set.
  std::vector<std::vector<std::uint64_t>> initial_states;
  // [prop][source symbol][state]: states with a transition into it.
  std::vector<std::vector<std::vector<std::uint64_t>>> predecessors;
  std::map<std::pair<Symbol, std::uint32_t>, Symbol> index;
  std::map<std::vector<std::uint64_t>, std::uint32_t> tuple_index;

  // Per prop, the states accepting `symbol` on top of tuple `below`.
  std::vector<std::uint64_t> step(Symbol symbol, std::uint32_t below) const;

  HeadLabeling labeling() const;
  // Annotated copy of a source stack; nullopt when some symbol with its
  // annotation never occurs in the reachable fragment.
  std::optional<Stack> annotate(const Stack& stack) const;
};

// Annotates every stack reachable from the model's DCLICs and the given seed
// stacks. Each proposition automaton must have at most 64 states. Throws
// ResourceLimit when more than `cap` annotated symbols are needed.
RegularAnnotation annotate_regular(const LockDpnModel& dpn,
                                   const std::vector<Stack>& seeds,
                                   std::size_t cap = kDefaultAnnotationCap);

}  // namespace ldpn
