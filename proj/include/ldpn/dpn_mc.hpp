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
#include <functional>
#include <optional>
#include <vector>

#include "ldpn/buchi.hpp"
#include "ldpn/model.hpp"

namespace ldpn {

// Letter read by an instance stepping from a configuration with the given
// control and top symbol.
using HeadLabeling = std::function<PropSet(ControlId, Symbol)>;

// Labels from the model's simple valuation (lock sets taken as empty).
HeadLabeling simple_labeling(const LockDpnModel& dpn);

inline constexpr std::uint32_t kNoControl = 0xffffffffu;

// Product of one DPDS with a Büchi automaton. Pushes are split to length at
// most two through helper controls, which are never accepting.
struct BuchiDpds {
  struct ProductRule {
    std::uint32_t from = 0;
    Symbol symbol = 0;
    std::uint32_t to = 0;
    std::vector<Symbol> push;            // at most two symbols
    std::optional<std::uint32_t> spawn;  // DCLIC index of the DPN
    std::uint32_t source_rule = 0;
  };

  std::size_t dpds = 0;
  std::size_t ba_states = 0;
  std::uint32_t initial_ba_state = 0;
  std::size_t base_controls = 0;  // |P_i| * |G_i|; helpers come after
  std::vector<ControlId> source_control;  // per product control
  // (p, initial BA state) per DPN control p of this DPDS, kNoControl otherwise
  std::vector<std::uint32_t> entry;
  std::vector<bool> accepting;            // per product control
  std::vector<ProductRule> rules;
  std::vector<Symbol> alphabet;

  // Product control (p, g) for a control p of this DPDS.
  std::uint32_t control(std::size_t local_index, std::uint32_t ba_state) const {
    return static_cast<std::uint32_t>(local_index * ba_states + ba_state);
  }
  std::size_t control_count() const { return source_control.size(); }
};

BuchiDpds build_bpds(const LockDpnModel& dpn, std::size_t dpds,
                     const BuchiAutomaton& ba, const HeadLabeling& labels);

// Allowed spawn targets, one flag per DCLIC of the DPN.
using DclicMask = std::vector<char>;

DclicMask all_dclics(const LockDpnModel& dpn);

struct Head {
  std::uint32_t control = 0;
  Symbol symbol = 0;
  friend auto operator<=>(const Head&, const Head&) = default;
};

// Heads (q, g) from which q g w is reachable again from q g w' through a
// nonempty path visiting an accepting control, spawning only within `allowed`.
std::vector<Head> repeating_heads(const BuchiDpds& b, const DclicMask& allowed);

// pre*(Rep · Γ*) as an automaton over product controls.
class AcceptingSet {
 public:
  bool accepts(std::uint32_t control, const Stack& stack) const;
  std::size_t transition_count() const;

 private:
  friend AcceptingSet accepting_set(const BuchiDpds&, const DclicMask&);
  std::size_t states_ = 0;
  // successors by (state, symbol), sorted
  std::vector<std::vector<std::pair<Symbol, std::uint32_t>>> out_;
  std::uint32_t final_ = 0;
};

AcceptingSet accepting_set(const BuchiDpds& b, const DclicMask& allowed);

// Whether some local run from (p, w), with the automaton in its initial
// state, is accepting while spawning only allowed DCLICs.
bool accepting_from(const BuchiDpds& b, const LocalConfiguration& c,
                    const DclicMask& allowed);

struct DfpResult {
  DclicMask members;
  std::size_t rounds = 0;
};

// Greatest fixpoint of D -> {c in D : accepting_from(c, D)}, starting from
// every DCLIC. `parallel` spreads each round over the DPDSs.
DfpResult compute_dfp(const LockDpnModel& dpn,
                      const std::vector<BuchiDpds>& products,
                      bool parallel = true);

bool check_config(const std::vector<BuchiDpds>& products,
                  const LockDpnModel& dpn, const DclicMask& dfp,
                  const LocalConfiguration& c);

// Products for every DPDS of a lock-free DPN and its formulas.
std::vector<BuchiDpds> build_products(const LockDpnModel& dpn,
                                      const std::vector<BuchiAutomaton>& automata,
                                      const HeadLabeling& labels);

inline constexpr std::size_t kResultMaDclicCap = 12;

// Multi-automaton for the DPDS of `b`: a configuration p w is accepted with
// annotation D when some accepting local run from (p, initial BA state) w
// spawns only DCLICs in D. Annotations are minimal per transition. Throws
// ResourceLimit when the DPDS can spawn more than kResultMaDclicCap DCLICs.
MultiAutomaton build_result_ma(const LockDpnModel& dpn, const BuchiDpds& b);

// Whether some accepted annotation of the configuration lies within `dfp`.
bool ma_member_within(const MultiAutomaton& ma, const LocalConfiguration& c,
                      const DclicMask& dfp);

}  // namespace ldpn
