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

#include "ldpn/ltl.hpp"

namespace ldpn {

// Set of propositions, bit i standing for the i-th declared proposition.
using PropSet = std::uint64_t;
inline constexpr std::size_t kMaxProps = 64;

// Conjunction of literals. A letter matches when it contains every positive
// proposition and none of the negative ones.
struct Guard {
  PropSet positive = 0;
  PropSet negative = 0;

  bool matches(PropSet letter) const {
    return (letter & positive) == positive && (letter & negative) == 0;
  }
  friend bool operator==(const Guard&, const Guard&) = default;
};

struct BuchiTransition {
  std::uint32_t from;
  Guard guard;
  std::uint32_t to;
};

// State-based Büchi automaton over the alphabet 2^props. Transitions are kept
// symbolically; a guard stands for every letter it matches.
class BuchiAutomaton {
 public:
  BuchiAutomaton(std::vector<std::string> props, std::size_t state_count,
                 std::vector<BuchiTransition> transitions,
                 std::uint32_t initial, std::vector<bool> accepting);

  const std::vector<std::string>& props() const { return props_; }
  std::size_t state_count() const { return state_count_; }
  const std::vector<BuchiTransition>& transitions() const {
    return transitions_;
  }
  // Outgoing transition indices of `state`.
  const std::vector<std::uint32_t>& outgoing(std::uint32_t state) const {
    return outgoing_[state];
  }
  std::uint32_t initial() const { return initial_; }
  bool accepting(std::uint32_t state) const { return accepting_[state]; }
  bool has_accepting_state() const;
  PropSet alphabet_mask() const;
  std::optional<std::size_t> prop_index(const std::string& name) const;

  // Successor states on a concrete letter, sorted and deduplicated.
  std::vector<std::uint32_t> successors(std::uint32_t state,
                                        PropSet letter) const;

 private:
  std::vector<std::string> props_;
  std::size_t state_count_;
  std::vector<BuchiTransition> transitions_;
  std::vector<std::vector<std::uint32_t>> outgoing_;
  std::uint32_t initial_;
  std::vector<bool> accepting_;
};

// Tableau construction to a transition-based generalized automaton, then
// counter degeneralization. `props` must declare every atom of `formula`;
// without it the formula's own atoms are used.
BuchiAutomaton build_buchi(const LtlFormula& formula,
                           std::vector<std::string> props);
BuchiAutomaton build_buchi(const LtlFormula& formula);

// Whether stem·loop^ω has an accepting run. Throws std::invalid_argument on
// an empty loop or a letter outside the alphabet.
bool ba_accepts_lasso(const BuchiAutomaton& automaton,
                      const std::vector<PropSet>& stem,
                      const std::vector<PropSet>& loop);

std::string render_guard(const Guard& guard,
                         const std::vector<std::string>& props);

}  // namespace ldpn
