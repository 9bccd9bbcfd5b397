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

#include <algorithm>
#include <map>
#include <string>

#include "json.hpp"
#include "ldpn/error.hpp"
#include "ldpn/model.hpp"

namespace ldpn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

LockId lock_named(const std::vector<std::string>& locks, const json& j,
                  const std::string& where) {
  const std::string name = as_string(j, where);
  for (std::size_t i = 0; i < locks.size(); ++i)
    if (locks[i] == name) return static_cast<LockId>(i);
  fail(where, "undeclared lock '" + name + "'");
}

LockSet lockset_of(const std::vector<std::string>& locks, const json& j,
                   const std::string& where) {
  LockSet out;
  const auto& arr = as_array(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i)
    out = out.with(lock_named(locks, arr[i],
                              where + "[" + std::to_string(i) + "]"));
  return out;
}

ControlId control_named(const ModelBuilder& b, const json& j,
                        const std::string& where) {
  const std::string name = as_string(j, where);
  const auto c = b.find_control(name);
  if (!c) fail(where, "unknown control '" + name + "'");
  return *c;
}

Symbol symbol_named(const ModelBuilder& b, const json& j,
                    const std::string& where) {
  const std::string name = as_string(j, where);
  const auto s = b.find_symbol(name);
  if (!s) fail(where, "unknown stack symbol '" + name + "'");
  return *s;
}

Stack stack_of(const ModelBuilder& b, const json& j, const std::string& where) {
  Stack out;
  const auto& arr = as_array(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(symbol_named(b, arr[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// [control, [symbols...]]
std::pair<ControlId, Stack> target_of(const ModelBuilder& b, const json& j,
                                      const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    fail(where, "expected [control, [symbols...]]");
  return {control_named(b, j[0], where + "[0]"),
          stack_of(b, j[1], where + "[1]")};
}

Action action_of(const std::vector<std::string>& locks, const json& j,
                 const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "tau") return Action::tau();
    fail(where, "unknown action '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.size() == 1) {
    if (j.contains("acq"))
      return Action::acquire(lock_named(locks, j["acq"], where + ".acq"));
    if (j.contains("rel"))
      return Action::release(lock_named(locks, j["rel"], where + ".rel"));
  }
  fail(where, "expected \"tau\", {\"acq\": lock} or {\"rel\": lock}");
}

MultiAutomaton lma_of(const ModelBuilder& b, const std::vector<std::string>& locks,
                      const json& j, const std::string& where) {
  MultiAutomaton a;
  const auto& states = as_array(member(j, "states", where), where + ".states");
  std::map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string name =
        as_string(states[i], where + ".states[" + std::to_string(i) + "]");
    if (!index.emplace(name, static_cast<std::uint32_t>(i)).second)
      fail(where + ".states", "duplicate state '" + name + "'");
    a.state_names.push_back(name);
  }
  a.accepting.assign(states.size(), false);
  const auto state = [&](const json& s, const std::string& w) {
    const std::string name = as_string(s, w);
    const auto it = index.find(name);
    if (it == index.end()) fail(w, "unknown state '" + name + "'");
    return it->second;
  };
  const auto& initials =
      as_array(member(j, "initials", where), where + ".initials");
  for (std::size_t i = 0; i < initials.size(); ++i) {
    const std::string w = where + ".initials[" + std::to_string(i) + "]";
    MaInitial init;
    init.state = state(member(initials[i], "state", w), w + ".state");
    init.control = control_named(b, member(initials[i], "control", w), w + ".control");
    if (initials[i].contains("locks"))
      init.locks = lockset_of(locks, initials[i]["locks"], w + ".locks");
    else
      init.locks = LockSet{};
    a.initials.push_back(init);
  }
  const auto& accepting =
      as_array(member(j, "accepting", where), where + ".accepting");
  for (std::size_t i = 0; i < accepting.size(); ++i)
    a.accepting[state(accepting[i],
                      where + ".accepting[" + std::to_string(i) + "]")] = true;
  const auto& transitions =
      as_array(member(j, "transitions", where), where + ".transitions");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string w = where + ".transitions[" + std::to_string(i) + "]";
    const auto& t = transitions[i];
    if (!t.is_array() || t.size() != 3) fail(w, "expected [state, symbol, state]");
    a.transitions.push_back({state(t[0], w + "[0]"),
                             symbol_named(b, t[1], w + "[1]"), 0,
                             state(t[2], w + "[2]")});
  }
  return a;
}

json lockset_json(const LockDpnModel& m, LockSet s) {
  json out = json::array();
  for (LockId l : s.members()) out.push_back(m.locks()[l]);
  return out;
}

json stack_json(const LockDpnModel& m, const Stack& s) {
  json out = json::array();
  for (Symbol x : s) out.push_back(m.symbols()[x]);
  return out;
}

}  // namespace

LockDpnModel load_model(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) fail("document", "expected an object");

  ModelBuilder b;
  std::vector<std::string> locks;
  if (doc.contains("locks")) {
    const auto& arr = as_array(doc["locks"], "locks");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      locks.push_back(as_string(arr[i], "locks[" + std::to_string(i) + "]"));
      b.add_lock(locks.back());
    }
  }
  std::vector<std::string> props;
  if (doc.contains("props")) {
    const auto& arr = as_array(doc["props"], "props");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      props.push_back(as_string(arr[i], "props[" + std::to_string(i) + "]"));
      b.add_prop(props.back());
    }
  }

  const auto& pds = as_array(member(doc, "pds", "document"), "pds");
  // Declarations first so that rules and spawns may refer to later systems.
  for (std::size_t d = 0; d < pds.size(); ++d) {
    const std::string where = "pds[" + std::to_string(d) + "]";
    const std::size_t id = b.add_dpds(as_string(member(pds[d], "name", where),
                                                 where + ".name"));
    const auto& controls =
        as_array(member(pds[d], "controls", where), where + ".controls");
    for (std::size_t i = 0; i < controls.size(); ++i)
      b.add_control(id, as_string(controls[i], where + ".controls[" +
                                                   std::to_string(i) + "]"));
    const auto& stack = as_array(member(pds[d], "stack", where), where + ".stack");
    for (std::size_t i = 0; i < stack.size(); ++i)
      b.add_symbol(id, as_string(stack[i], where + ".stack[" +
                                               std::to_string(i) + "]"));
  }
  for (std::size_t d = 0; d < pds.size(); ++d) {
    const std::string where = "pds[" + std::to_string(d) + "]";
    const auto& rules = as_array(member(pds[d], "rules", where), where + ".rules");
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const std::string w = where + ".rules[" + std::to_string(i) + "]";
      const auto& r = rules[i];
      const auto& from = member(r, "from", w);
      if (!from.is_array() || from.size() != 2)
        fail(w + ".from", "expected [control, symbol]");
      const ControlId fc = control_named(b, from[0], w + ".from[0]");
      const Symbol fs = symbol_named(b, from[1], w + ".from[1]");
      const Action action = action_of(locks, member(r, "action", w), w + ".action");
      const auto [tc, push] = target_of(b, member(r, "to", w), w + ".to");
      std::optional<Dclic> spawn;
      if (r.contains("spawn") && !r["spawn"].is_null()) {
        auto [sc, ss] = target_of(b, r["spawn"], w + ".spawn");
        spawn = Dclic{sc, std::move(ss)};
      }
      try {
        b.add_rule(fc, fs, action, tc, push, spawn);
      } catch (const ValidationError& e) {
        fail(w, e.what());
      }
    }
  }

  Valuation v;
  if (doc.contains("valuation")) {
    const auto& val = doc["valuation"];
    const std::string kind = as_string(member(val, "type", "valuation"),
                                       "valuation.type");
    const auto& map = member(val, "map", "valuation");
    if (!map.is_object()) fail("valuation.map", "expected an object");
    for (const auto& [ap, _] : map.items())
      if (std::find(props.begin(), props.end(), ap) == props.end())
        fail("valuation.map", "undeclared proposition '" + ap + "'");
    if (kind == "simple") {
      v.kind = ValuationKind::kSimple;
      v.simple.resize(props.size());
      for (std::size_t p = 0; p < props.size(); ++p) {
        if (!map.contains(props[p])) continue;
        const std::string w = "valuation.map." + props[p];
        const auto& entries = as_array(map[props[p]], w);
        for (std::size_t i = 0; i < entries.size(); ++i) {
          const std::string we = w + "[" + std::to_string(i) + "]";
          SimpleAtom atom;
          atom.control = control_named(b, member(entries[i], "control", we),
                                       we + ".control");
          if (entries[i].contains("locks"))
            atom.locks = lockset_of(locks, entries[i]["locks"], we + ".locks");
          v.simple[p].push_back(atom);
        }
      }
    } else if (kind == "regular") {
      v.kind = ValuationKind::kRegular;
      for (std::size_t p = 0; p < props.size(); ++p) {
        const std::string w = "valuation.map." + props[p];
        if (!map.contains(props[p])) fail("valuation.map", "no automaton for '" + props[p] + "'");
        v.regular.push_back(lma_of(b, locks, map[props[p]], w));
      }
    } else {
      fail("valuation.type", "expected \"simple\" or \"regular\"");
    }
  } else {
    v.simple.resize(props.size());
  }
  b.set_valuation(std::move(v));

  if (doc.contains("initial") && !doc["initial"].is_null()) {
    const auto& init = doc["initial"];
    LocalConfiguration c;
    c.control = control_named(b, member(init, "control", "initial"), "initial.control");
    c.stack = stack_of(b, member(init, "stack", "initial"), "initial.stack");
    if (init.contains("locks"))
      c.locks = lockset_of(locks, init["locks"], "initial.locks");
    b.set_initial(std::move(c));
  }
  return std::move(b).build();
}

std::string save_model(const LockDpnModel& m) {
  json doc;
  doc["locks"] = m.locks();
  doc["props"] = m.props();
  json pds = json::array();
  for (const auto& d : m.dpds()) {
    json entry;
    entry["name"] = d.name;
    json controls = json::array();
    for (auto c : d.controls) controls.push_back(m.controls()[c]);
    entry["controls"] = controls;
    json stack = json::array();
    for (auto s : d.alphabet) stack.push_back(m.symbols()[s]);
    entry["stack"] = stack;
    json rules = json::array();
    for (auto ri : d.rules) {
      const Rule& r = m.rules()[ri];
      json rule;
      rule["from"] = {m.controls()[r.from], m.symbols()[r.symbol]};
      switch (r.action.kind) {
        case ActionKind::kTau: rule["action"] = "tau"; break;
        case ActionKind::kAcquire:
          rule["action"] = {{"acq", m.locks()[r.action.lock]}};
          break;
        case ActionKind::kRelease:
          rule["action"] = {{"rel", m.locks()[r.action.lock]}};
          break;
      }
      rule["to"] = {m.controls()[r.to], stack_json(m, r.push)};
      if (r.spawn) {
        const Dclic& s = m.dclics()[*r.spawn];
        rule["spawn"] = {m.controls()[s.control], stack_json(m, s.stack)};
      } else {
        rule["spawn"] = nullptr;
      }
      rules.push_back(rule);
    }
    entry["rules"] = rules;
    pds.push_back(entry);
  }
  doc["pds"] = pds;

  const Valuation& v = m.valuation();
  json map = json::object();
  if (v.kind == ValuationKind::kSimple) {
    for (std::size_t p = 0; p < m.props().size(); ++p) {
      json entries = json::array();
      for (const auto& e : v.simple[p]) {
        json atom;
        atom["control"] = m.controls()[e.control];
        if (e.locks) atom["locks"] = lockset_json(m, *e.locks);
        entries.push_back(atom);
      }
      map[m.props()[p]] = entries;
    }
    doc["valuation"] = {{"type", "simple"}, {"map", map}};
  } else {
    for (std::size_t p = 0; p < m.props().size(); ++p) {
      const MultiAutomaton& a = v.regular[p];
      json lma;
      lma["states"] = a.state_names;
      json initials = json::array();
      for (const auto& i : a.initials) {
        json init;
        init["state"] = a.state_names[i.state];
        init["control"] = m.controls()[i.control];
        init["locks"] = lockset_json(m, i.locks.value_or(LockSet{}));
        initials.push_back(init);
      }
      lma["initials"] = initials;
      json accepting = json::array();
      for (std::size_t q = 0; q < a.state_count(); ++q)
        if (a.accepting[q]) accepting.push_back(a.state_names[q]);
      lma["accepting"] = accepting;
      json transitions = json::array();
      for (const auto& t : a.transitions)
        transitions.push_back({a.state_names[t.from], m.symbols()[t.symbol],
                               a.state_names[t.to]});
      lma["transitions"] = transitions;
      map[m.props()[p]] = lma;
    }
    doc["valuation"] = {{"type", "regular"}, {"map", map}};
  }

  if (const auto& init = m.initial()) {
    doc["initial"] = {{"control", m.controls()[init->control]},
                      {"stack", stack_json(m, init->stack)},
                      {"locks", lockset_json(m, init->locks)}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace ldpn
