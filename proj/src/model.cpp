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

#include "ldpn/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ldpn/error.hpp"

namespace ldpn {

namespace {

std::uint64_t head_key(ControlId control, Symbol symbol) {
  return (std::uint64_t{control} << 32) | symbol;
}

// Room is left for internal propositions added by the checker.
constexpr std::size_t kMaxUserProps = kMaxProps - kMaxLocks;

}  // namespace

// ---------------------------------------------------------------------------
// LockDpnModel

const std::vector<std::uint32_t>& LockDpnModel::rules_from(ControlId control,
                                                           Symbol symbol) const {
  static const std::vector<std::uint32_t> kNone;
  const auto it = heads_.find(head_key(control, symbol));
  return it == heads_.end() ? kNone : it->second;
}

bool LockDpnModel::in_alphabet(std::size_t dpds, Symbol symbol) const {
  const auto& a = dpds_[dpds].alphabet;
  return std::binary_search(a.begin(), a.end(), symbol);
}

bool LockDpnModel::lock_free() const {
  if (!locks_.empty()) return false;
  return std::all_of(rules_.begin(), rules_.end(), [](const Rule& r) {
    return r.action.kind == ActionKind::kTau;
  });
}

std::optional<ControlId> LockDpnModel::find_control(std::string_view name) const {
  const auto it = control_index_.find(std::string(name));
  if (it == control_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Symbol> LockDpnModel::find_symbol(std::string_view name) const {
  const auto it = symbol_index_.find(std::string(name));
  if (it == symbol_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<LockId> LockDpnModel::find_lock(std::string_view name) const {
  for (std::size_t i = 0; i < locks_.size(); ++i)
    if (locks_[i] == name) return static_cast<LockId>(i);
  return std::nullopt;
}

std::optional<std::size_t> LockDpnModel::find_prop(std::string_view name) const {
  for (std::size_t i = 0; i < props_.size(); ++i)
    if (props_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> LockDpnModel::find_dpds(std::string_view name) const {
  for (std::size_t i = 0; i < dpds_.size(); ++i)
    if (dpds_[i].name == name) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// ModelBuilder

LockId ModelBuilder::add_lock(const std::string& name) {
  if (model_.find_lock(name))
    throw ValidationError("duplicate lock '" + name + "'");
  if (model_.locks_.size() >= kMaxLocks)
    throw ResourceLimit("at most " + std::to_string(kMaxLocks) +
                        " locks are supported");
  model_.locks_.push_back(name);
  return static_cast<LockId>(model_.locks_.size() - 1);
}

std::size_t ModelBuilder::add_prop(const std::string& name) {
  if (model_.find_prop(name))
    throw ValidationError("duplicate proposition '" + name + "'");
  if (model_.props_.size() >= kMaxUserProps)
    throw ResourceLimit("at most " + std::to_string(kMaxUserProps) +
                        " propositions are supported");
  model_.props_.push_back(name);
  return model_.props_.size() - 1;
}

std::size_t ModelBuilder::add_dpds(const std::string& name) {
  if (model_.find_dpds(name))
    throw ValidationError("duplicate pushdown system '" + name + "'");
  model_.dpds_.push_back(Dpds{name, {}, {}, {}});
  return model_.dpds_.size() - 1;
}

ControlId ModelBuilder::add_control(std::size_t dpds, const std::string& name) {
  if (dpds >= model_.dpds_.size())
    throw ValidationError("control '" + name + "' added to unknown system");
  if (const auto existing = model_.find_control(name)) {
    const std::size_t owner = model_.control_dpds_[*existing];
    if (owner != dpds)
      throw ValidationError("controls not disjoint: '" + name +
                            "' belongs to both " + model_.dpds_[owner].name +
                            " and " + model_.dpds_[dpds].name);
    throw ValidationError("duplicate control '" + name + "'");
  }
  const auto id = static_cast<ControlId>(model_.controls_.size());
  model_.controls_.push_back(name);
  model_.control_dpds_.push_back(dpds);
  model_.control_index_.emplace(name, id);
  model_.dpds_[dpds].controls.push_back(id);
  return id;
}

Symbol ModelBuilder::add_symbol(std::size_t dpds, const std::string& name) {
  if (dpds >= model_.dpds_.size())
    throw ValidationError("symbol '" + name + "' added to unknown system");
  Symbol id;
  if (const auto existing = model_.find_symbol(name)) {
    id = *existing;
  } else {
    id = static_cast<Symbol>(model_.symbols_.size());
    model_.symbols_.push_back(name);
    model_.symbol_index_.emplace(name, id);
  }
  auto& alphabet = model_.dpds_[dpds].alphabet;
  const auto it = std::lower_bound(alphabet.begin(), alphabet.end(), id);
  if (it == alphabet.end() || *it != id) alphabet.insert(it, id);
  return id;
}

void ModelBuilder::add_rule(ControlId from, Symbol symbol, Action action,
                            ControlId to, Stack push,
                            std::optional<Dclic> spawn) {
  pending_.push_back(
      {Rule{from, symbol, action, to, std::move(push), std::nullopt},
       std::move(spawn)});
}

void ModelBuilder::set_valuation(Valuation valuation) {
  model_.valuation_ = std::move(valuation);
}

void ModelBuilder::set_initial(LocalConfiguration initial) {
  model_.initial_ = std::move(initial);
}

std::optional<ControlId> ModelBuilder::find_control(std::string_view name) const {
  return model_.find_control(name);
}

std::optional<Symbol> ModelBuilder::find_symbol(std::string_view name) const {
  return model_.find_symbol(name);
}

namespace {

void check_stack(const LockDpnModel& m, std::size_t dpds, const Stack& stack,
                 const std::string& where) {
  for (Symbol s : stack) {
    if (s >= m.symbols().size())
      throw ValidationError(where + ": unknown stack symbol");
    if (!m.in_alphabet(dpds, s))
      throw ValidationError(where + ": symbol '" + m.symbols()[s] +
                            "' is not in the alphabet of " + m.dpds()[dpds].name);
  }
}

void check_locks(const LockDpnModel& m, LockSet locks, const std::string& where) {
  if (!locks.subset_of(LockSet::all(m.locks().size())))
    throw ValidationError(where + ": unknown lock");
}

void check_ma(const LockDpnModel& m, const MultiAutomaton& a,
              const std::string& where) {
  const std::size_t n = a.state_count();
  if (a.accepting.size() != n)
    throw ValidationError(where + ": accepting vector size mismatch");
  for (const auto& i : a.initials) {
    if (i.state >= n) throw ValidationError(where + ": initial state out of range");
    if (i.control >= m.controls().size())
      throw ValidationError(where + ": initial state keyed by unknown control");
    if (i.locks) check_locks(m, *i.locks, where);
  }
  for (const auto& t : a.transitions) {
    if (t.from >= n || t.to >= n)
      throw ValidationError(where + ": transition endpoint out of range");
    if (t.symbol >= m.symbols().size())
      throw ValidationError(where + ": transition on unknown symbol");
  }
}

}  // namespace

LockDpnModel ModelBuilder::build() && {
  LockDpnModel& m = model_;
  const std::size_t lock_count = m.locks_.size();

  std::set<Dclic> targets;
  for (const auto& p : pending_)
    if (p.spawn) targets.insert(*p.spawn);
  m.dclics_.assign(targets.begin(), targets.end());

  m.rules_.clear();
  for (auto& d : m.dpds_) d.rules.clear();
  m.heads_.clear();
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    Rule r = pending_[i].rule;
    const std::string where = "rule " + std::to_string(i);
    if (r.from >= m.controls_.size() || r.to >= m.controls_.size())
      throw ValidationError(where + ": unknown control");
    const std::size_t d = m.control_dpds_[r.from];
    if (m.control_dpds_[r.to] != d)
      throw ValidationError(where + ": target control '" + m.controls_[r.to] +
                            "' belongs to another system");
    check_stack(m, d, Stack{r.symbol}, where);
    check_stack(m, d, r.push, where);
    if (r.action.kind != ActionKind::kTau && r.action.lock >= lock_count)
      throw ValidationError(where + ": action on undeclared lock");
    if (const auto& s = pending_[i].spawn) {
      if (s->control >= m.controls_.size())
        throw ValidationError(where + ": spawn of unknown control");
      check_stack(m, m.control_dpds_[s->control], s->stack, where + " spawn");
      r.spawn = static_cast<std::uint32_t>(
          std::lower_bound(m.dclics_.begin(), m.dclics_.end(), *s) -
          m.dclics_.begin());
    }
    const auto id = static_cast<std::uint32_t>(m.rules_.size());
    m.heads_[head_key(r.from, r.symbol)].push_back(id);
    m.dpds_[d].rules.push_back(id);
    m.rules_.push_back(std::move(r));
  }

  Valuation& v = m.valuation_;
  if (v.kind == ValuationKind::kSimple) {
    if (v.simple.empty()) v.simple.resize(m.props_.size());
    if (v.simple.size() != m.props_.size())
      throw ValidationError("valuation does not cover the declared propositions");
    for (auto& entries : v.simple) {
      for (const auto& e : entries) {
        if (e.control >= m.controls_.size())
          throw ValidationError("valuation refers to an unknown control");
        if (e.locks) check_locks(m, *e.locks, "valuation");
      }
      std::sort(entries.begin(), entries.end());
      entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    }
    v.regular.clear();
  } else {
    if (v.regular.size() != m.props_.size())
      throw ValidationError("valuation does not cover the declared propositions");
    for (std::size_t i = 0; i < v.regular.size(); ++i)
      check_ma(m, v.regular[i], "valuation of '" + m.props_[i] + "'");
    v.simple.clear();
  }

  if (m.initial_) {
    const auto& c = *m.initial_;
    if (c.control >= m.controls_.size())
      throw ValidationError("initial configuration: unknown control");
    check_stack(m, m.control_dpds_[c.control], c.stack, "initial configuration");
    check_locks(m, c.locks, "initial configuration");
  }
  return std::move(model_);
}

// ---------------------------------------------------------------------------
// Configurations, automata and valuations

GlobalConfiguration::GlobalConfiguration(std::vector<LocalConfiguration> elements)
    : elements_(std::move(elements)) {
  LockSet seen;
  for (const auto& e : elements_) {
    if (!(seen & e.locks).empty())
      throw ValidationError("global configuration: a lock has two owners");
    seen = seen | e.locks;
  }
}

LockSet GlobalConfiguration::hold() const {
  LockSet out;
  for (const auto& e : elements_) out = out | e.locks;
  return out;
}

LockSet GlobalConfiguration::free(std::size_t lock_count) const {
  return LockSet::all(lock_count) - hold();
}

std::vector<LocalConfiguration> GlobalConfiguration::canonical() const {
  auto out = elements_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Dclic> dclics_of(const LockDpnModel& model) {
  std::set<Dclic> out;
  for (const auto& r : model.rules())
    if (r.spawn) out.insert(model.dclics()[*r.spawn]);
  return {out.begin(), out.end()};
}

std::vector<DclicSet> ma_accepts(const MultiAutomaton& a, ControlId control,
                                 LockSet locks, const Stack& stack) {
  std::vector<std::vector<std::uint32_t>> out_edges(a.state_count());
  for (std::uint32_t i = 0; i < a.transitions.size(); ++i)
    out_edges[a.transitions[i].from].push_back(i);
  std::set<std::pair<std::uint32_t, DclicSet>> current;
  for (const auto& i : a.initials)
    if (i.control == control && (!i.locks || *i.locks == locks))
      current.emplace(i.state, DclicSet{0});
  for (Symbol s : stack) {
    std::set<std::pair<std::uint32_t, DclicSet>> next;
    for (const auto& [q, d] : current)
      for (auto ti : out_edges[q]) {
        const auto& t = a.transitions[ti];
        if (t.symbol == s) next.emplace(t.to, d | t.dclics);
      }
    current = std::move(next);
    if (current.empty()) break;
  }
  std::set<DclicSet> result;
  for (const auto& [q, d] : current)
    if (a.accepting[q]) result.insert(d);
  return {result.begin(), result.end()};
}

bool valuation_holds(const LockDpnModel& model, std::size_t prop,
                     const LocalConfiguration& c) {
  if (prop >= model.props().size())
    throw ValidationError("undeclared proposition");
  const Valuation& v = model.valuation();
  if (v.kind == ValuationKind::kSimple) {
    for (const auto& e : v.simple[prop])
      if (e.control == c.control && (!e.locks || *e.locks == c.locks))
        return true;
    return false;
  }
  const auto ds = ma_accepts(v.regular[prop], c.control, c.locks, c.stack);
  return std::find(ds.begin(), ds.end(), DclicSet{0}) != ds.end();
}

bool valuation_holds(const LockDpnModel& model, std::string_view prop,
                     const LocalConfiguration& c) {
  const auto index = model.find_prop(prop);
  if (!index)
    throw ValidationError("undeclared proposition '" + std::string(prop) + "'");
  return valuation_holds(model, *index, c);
}

PropSet label_of(const LockDpnModel& model, const LocalConfiguration& c) {
  PropSet out = 0;
  for (std::size_t i = 0; i < model.props().size(); ++i)
    if (valuation_holds(model, i, c)) out |= PropSet{1} << i;
  return out;
}

// ---------------------------------------------------------------------------
// Formula files

std::vector<LtlFormula> parse_formulas(const LockDpnModel& model,
                                       std::string_view text) {
  std::vector<std::optional<LtlFormula>> found(model.dpds().size());
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto colon = line.find(':');
    const std::string where = "formula file line " + std::to_string(number);
    if (colon == std::string::npos)
      throw ParseError(where + ": expected '<system>: <formula>'");
    std::string name = line.substr(first, colon - first);
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t'))
      name.pop_back();
    const auto d = model.find_dpds(name);
    if (!d) throw ValidationError(where + ": unknown system '" + name + "'");
    if (found[*d])
      throw ValidationError(where + ": second formula for '" + name + "'");
    LtlFormula f = LtlFormula::truth();
    try {
      f = parse_ltl(std::string_view(line).substr(colon + 1));
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    for (const auto& a : atoms(f))
      if (!model.find_prop(a))
        throw ValidationError(where + ": undeclared proposition '" + a + "'");
    found[*d] = f;
  }
  std::vector<LtlFormula> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (!found[i])
      throw ValidationError("formula file has no line for '" +
                            model.dpds()[i].name + "'");
    out.push_back(*found[i]);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<LtlFormula> load_formulas_file(const LockDpnModel& model,
                                           const std::string& path) {
  return parse_formulas(model, read_text_file(path));
}

LockDpnModel load_model_file(const std::string& path) {
  return load_model(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_stack(const LockDpnModel& model, const Stack& stack) {
  if (stack.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (i) out += ' ';
    out += model.symbols()[stack[i]];
  }
  return out;
}

std::string render_config(const LockDpnModel& model,
                          const LocalConfiguration& c) {
  return "(" + model.controls()[c.control] + " " + render_stack(model, c.stack) +
         ", " + render_lockset(c.locks, model.locks()) + ")";
}

std::string render_dclic(const LockDpnModel& model, const Dclic& d) {
  return model.controls()[d.control] + " " + render_stack(model, d.stack);
}

std::string render_action(const LockDpnModel& model, const Action& a) {
  switch (a.kind) {
    case ActionKind::kTau: return "tau";
    case ActionKind::kAcquire: return "acq(" + model.locks()[a.lock] + ")";
    case ActionKind::kRelease: return "rel(" + model.locks()[a.lock] + ")";
  }
  return "?";
}

std::string render_rule(const LockDpnModel& model, const Rule& r) {
  std::string out = model.controls()[r.from] + " " + model.symbols()[r.symbol] +
                    " -" + render_action(model, r.action) + "-> " +
                    model.controls()[r.to] + " " + render_stack(model, r.push);
  if (r.spawn) out += " |> " + render_dclic(model, model.dclics()[*r.spawn]);
  return out;
}

}  // namespace ldpn
