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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ldpn/buchi.hpp"
#include "ldpn/lockset.hpp"
#include "ldpn/ltl.hpp"

namespace ldpn {

using ControlId = std::uint32_t;
using Symbol = std::uint32_t;
// Stack content, top of stack first.
using Stack = std::vector<Symbol>;

enum class ActionKind : std::uint8_t { kTau, kAcquire, kRelease };

struct Action {
  ActionKind kind = ActionKind::kTau;
  LockId lock = 0;

  static constexpr Action tau() { return {}; }
  static constexpr Action acquire(LockId l) { return {ActionKind::kAcquire, l}; }
  static constexpr Action release(LockId l) { return {ActionKind::kRelease, l}; }
  friend auto operator<=>(const Action&, const Action&) = default;
};

struct LocalConfiguration {
  ControlId control = 0;
  Stack stack;
  LockSet locks;
  friend auto operator<=>(const LocalConfiguration&,
                          const LocalConfiguration&) = default;
};

// Start configuration of a spawned instance; its lock set is always empty.
struct Dclic {
  ControlId control = 0;
  Stack stack;
  friend auto operator<=>(const Dclic&, const Dclic&) = default;
};

struct Rule {
  ControlId from = 0;
  Symbol symbol = 0;
  Action action;
  ControlId to = 0;
  Stack push;
  std::optional<std::uint32_t> spawn;  // index into LockDpnModel::dclics()
};

struct Dpds {
  std::string name;
  std::vector<ControlId> controls;
  std::vector<Symbol> alphabet;  // sorted
  std::vector<std::uint32_t> rules;
};

// Bit i stands for the i-th DCLIC of the model.
using DclicSet = std::uint64_t;
inline constexpr std::size_t kMaxAnnotatedDclics = 64;

struct MaInitial {
  std::uint32_t state = 0;
  ControlId control = 0;
  std::optional<LockSet> locks;  // nullopt for plain (lock-free) MAs
};

struct MaTransition {
  std::uint32_t from = 0;
  Symbol symbol = 0;
  DclicSet dclics = 0;
  std::uint32_t to = 0;
};

// (L-)multi-automaton: reads a stack top-first from the initial state keyed
// by the configuration's control (and lock set).
struct MultiAutomaton {
  std::vector<std::string> state_names;
  std::vector<MaInitial> initials;
  std::vector<bool> accepting;
  std::vector<MaTransition> transitions;

  std::size_t state_count() const { return state_names.size(); }
};

// Every D such that the configuration is accepted with annotation D. The
// result is sorted and contains each set once; no antichain reduction.
std::vector<DclicSet> ma_accepts(const MultiAutomaton& automaton,
                                 ControlId control, LockSet locks,
                                 const Stack& stack);

// One entry of a simple valuation. A missing lock set matches any lock set.
struct SimpleAtom {
  ControlId control = 0;
  std::optional<LockSet> locks;
  friend auto operator<=>(const SimpleAtom&, const SimpleAtom&) = default;
};

enum class ValuationKind : std::uint8_t { kSimple, kRegular };

// Indexed by proposition. Exactly one of the two tables is in use.
struct Valuation {
  ValuationKind kind = ValuationKind::kSimple;
  std::vector<std::vector<SimpleAtom>> simple;
  std::vector<MultiAutomaton> regular;
};

class LockDpnModel {
 public:
  const std::vector<std::string>& locks() const { return locks_; }
  const std::vector<std::string>& props() const { return props_; }
  const std::vector<std::string>& controls() const { return controls_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::vector<Dpds>& dpds() const { return dpds_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<Dclic>& dclics() const { return dclics_; }
  const Valuation& valuation() const { return valuation_; }
  const std::optional<LocalConfiguration>& initial() const { return initial_; }

  std::size_t dpds_of(ControlId control) const { return control_dpds_[control]; }
  // Rule ids with head (control, symbol), ascending.
  const std::vector<std::uint32_t>& rules_from(ControlId control,
                                               Symbol symbol) const;
  bool in_alphabet(std::size_t dpds, Symbol symbol) const;
  // No locks and only tau actions.
  bool lock_free() const;

  std::optional<ControlId> find_control(std::string_view name) const;
  std::optional<Symbol> find_symbol(std::string_view name) const;
  std::optional<LockId> find_lock(std::string_view name) const;
  std::optional<std::size_t> find_prop(std::string_view name) const;
  std::optional<std::size_t> find_dpds(std::string_view name) const;

 private:
  friend class ModelBuilder;

  std::vector<std::string> locks_;
  std::vector<std::string> props_;
  std::vector<std::string> controls_;
  std::vector<std::size_t> control_dpds_;
  std::vector<std::string> symbols_;
  std::vector<Dpds> dpds_;
  std::vector<Rule> rules_;
  std::vector<Dclic> dclics_;
  Valuation valuation_;
  std::optional<LocalConfiguration> initial_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> heads_;
  std::unordered_map<std::string, ControlId> control_index_;
  std::unordered_map<std::string, Symbol> symbol_index_;
};

// Incremental construction; build() validates everything and fixes the DCLIC
// numbering (sorted, deduplicated spawn targets).
class ModelBuilder {
 public:
  LockId add_lock(const std::string& name);
  std::size_t add_prop(const std::string& name);
  std::size_t add_dpds(const std::string& name);
  ControlId add_control(std::size_t dpds, const std::string& name);
  // Symbols are interned model-wide; the same name may belong to several
  // alphabets.
  Symbol add_symbol(std::size_t dpds, const std::string& name);
  void add_rule(ControlId from, Symbol symbol, Action action, ControlId to,
                Stack push, std::optional<Dclic> spawn = std::nullopt);
  void set_valuation(Valuation valuation);
  void set_initial(LocalConfiguration initial);

  std::optional<ControlId> find_control(std::string_view name) const;
  std::optional<Symbol> find_symbol(std::string_view name) const;

  LockDpnModel build() &&;

 private:
  struct PendingRule {
    Rule rule;
    std::optional<Dclic> spawn;
  };
  LockDpnModel model_;
  std::vector<PendingRule> pending_;
};

// Multiset of local configurations with pairwise disjoint lock sets.
class GlobalConfiguration {
 public:
  GlobalConfiguration() = default;
  // Throws ValidationError when two elements hold the same lock.
  explicit GlobalConfiguration(std::vector<LocalConfiguration> elements);

  const std::vector<LocalConfiguration>& elements() const { return elements_; }
  LockSet hold() const;
  LockSet free(std::size_t lock_count) const;
  // Sorted copy; equal multisets give equal canonical forms.
  std::vector<LocalConfiguration> canonical() const;

  friend bool operator==(const GlobalConfiguration& a,
                         const GlobalConfiguration& b) {
    return a.canonical() == b.canonical();
  }

 private:
  std::vector<LocalConfiguration> elements_;
};

// Deduplicated spawn targets, recomputed by scanning the rules.
std::vector<Dclic> dclics_of(const LockDpnModel& model);

bool valuation_holds(const LockDpnModel& model, std::string_view prop,
                     const LocalConfiguration& config);
bool valuation_holds(const LockDpnModel& model, std::size_t prop,
                     const LocalConfiguration& config);
PropSet label_of(const LockDpnModel& model, const LocalConfiguration& config);

// JSON model documents.
LockDpnModel load_model(std::string_view document);
LockDpnModel load_model_file(const std::string& path);
std::string save_model(const LockDpnModel& model);

// Formula files: one "<dpds-name>: <ltl>" line per DPDS; blank lines and
// lines starting with '#' are skipped. Result indexed by DPDS.
std::vector<LtlFormula> parse_formulas(const LockDpnModel& model,
                                       std::string_view text);
std::vector<LtlFormula> load_formulas_file(const LockDpnModel& model,
                                           const std::string& path);
std::string read_text_file(const std::string& path);

std::string render_stack(const LockDpnModel& model, const Stack& stack);
std::string render_config(const LockDpnModel& model,
                          const LocalConfiguration& config);
std::string render_dclic(const LockDpnModel& model, const Dclic& dclic);
std::string render_action(const LockDpnModel& model, const Action& action);
std::string render_rule(const LockDpnModel& model, const Rule& rule);

}  // namespace ldpn
