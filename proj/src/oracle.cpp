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

#include "ldpn/oracle.hpp"

#include <algorithm>
#include <unordered_map>

#include "ldpn/buchi.hpp"
#include "ldpn/error.hpp"
#include "ldpn/graph.hpp"
#include "ldpn/run_tree.hpp"

namespace ldpn {

namespace {

struct Slot {
  LocalConfiguration config;
  std::uint32_t ba_state = 0;
  std::vector<LockId> open;  // own acquisitions, most recent last
};

using Key = std::vector<std::uint32_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto x : k) {
      h ^= x;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

Key encode(const std::vector<Slot>& slots) {
  Key k;
  k.push_back(static_cast<std::uint32_t>(slots.size()));
  for (const auto& s : slots) {
    k.push_back(s.config.control);
    k.push_back(s.ba_state);
    k.push_back(s.config.locks.bits());
    k.push_back(static_cast<std::uint32_t>(s.open.size()));
    for (auto l : s.open) k.push_back(l);
    k.push_back(static_cast<std::uint32_t>(s.config.stack.size()));
    k.insert(k.end(), s.config.stack.begin(), s.config.stack.end());
  }
  return k;
}

}  // namespace

OracleResult explicit_buchi_oracle(const LockDpnModel& model,
                                   const std::vector<LtlFormula>& formulas,
                                   const GlobalConfiguration& start,
                                   const OracleOptions& options) {
  if (formulas.size() != model.dpds().size())
    throw ValidationError("oracle: expected one formula per system");
  std::vector<BuchiAutomaton> automata;
  for (const auto& f : formulas) automata.push_back(build_buchi(f, model.props()));

  std::vector<std::vector<Slot>> states;
  std::unordered_map<Key, std::uint32_t, KeyHash> index;
  struct Edge {
    std::uint32_t to;
    std::uint32_t slot;
  };
  std::vector<std::vector<Edge>> edges;
  std::vector<bool> present(model.dpds().size(), false);

  const auto intern = [&](std::vector<Slot> slots) {
    if (slots.size() > options.instance_bound)
      throw ResourceLimit("oracle: more than " +
                          std::to_string(options.instance_bound) + " instances");
    for (const auto& s : slots)
      if (s.config.stack.size() > options.stack_bound)
        throw ResourceLimit("oracle: stack exceeds bound " +
                            std::to_string(options.stack_bound));
    auto key = encode(slots);
    const auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (states.size() >= options.max_states)
      throw ResourceLimit("oracle: more than " +
                          std::to_string(options.max_states) + " states");
    const auto id = static_cast<std::uint32_t>(states.size());
    index.emplace(std::move(key), id);
    for (const auto& s : slots) present[model.dpds_of(s.config.control)] = true;
    states.push_back(std::move(slots));
    edges.emplace_back();
    return id;
  };

  {
    std::vector<Slot> init;
    for (const auto& c : start.elements())
      init.push_back({c, automata[model.dpds_of(c.control)].initial(), {}});
    intern(std::move(init));
  }

  std::size_t edge_count = 0;
  for (std::uint32_t id = 0; id < states.size(); ++id) {
    const std::vector<Slot> slots = states[id];
    LockSet held;
    for (const auto& s : slots) held = held | s.config.locks;
    const LockSet free = LockSet::all(model.locks().size()) - held;
    for (std::uint32_t i = 0; i < slots.size(); ++i) {
      const Slot& s = slots[i];
      if (s.config.stack.empty()) continue;
      const auto& automaton = automata[model.dpds_of(s.config.control)];
      const PropSet letter = label_of(model, s.config);
      const auto ba_next = automaton.successors(s.ba_state, letter);
      if (ba_next.empty()) continue;
      for (auto ri : model.rules_from(s.config.control, s.config.stack.front())) {
        const Action& a = model.rules()[ri].action;
        std::vector<LockId> open = s.open;
        if (a.kind == ActionKind::kAcquire) {
          if (!free.contains(a.lock)) continue;
          open.push_back(a.lock);
        } else if (a.kind == ActionKind::kRelease) {
          if (!s.config.locks.contains(a.lock)) continue;
          if (!open.empty()) {
            if (options.nested && open.back() != a.lock) continue;
            const auto it = std::find(open.begin(), open.end(), a.lock);
            if (it != open.end()) open.erase(it);
          }
        }
        Successor succ = apply_rule(model, s.config, ri);
        for (auto g : ba_next) {
          std::vector<Slot> next = slots;
          next[i] = Slot{succ.next, g, open};
          if (succ.spawned) {
            const auto& child = automata[model.dpds_of(succ.spawned->control)];
            next.push_back(Slot{*succ.spawned, child.initial(), {}});
          }
          const auto to = intern(std::move(next));
          edges[id].push_back({to, i});
          ++edge_count;
        }
      }
    }
  }

  OracleResult result;
  result.states = states.size();
  result.edges = edge_count;
  for (std::size_t d = 0; d < present.size(); ++d)
    if (!present[d]) result.vacuous.push_back(d);

  std::vector<std::vector<std::uint32_t>> succ(states.size());
  for (std::uint32_t v = 0; v < states.size(); ++v)
    for (const auto& e : edges[v]) succ[v].push_back(e.to);
  const auto scc = strongly_connected_components(succ);

  // Per component: which slots step inside it and which are seen accepting.
  const std::size_t n = states.size();
  std::vector<std::vector<bool>> steps(scc.count), accepting(scc.count);
  std::vector<std::size_t> width(scc.count, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto c = scc.component[v];
    width[c] = states[v].size();
    if (steps[c].empty()) {
      steps[c].assign(width[c], false);
      accepting[c].assign(width[c], false);
    }
    for (std::size_t i = 0; i < states[v].size(); ++i) {
      const auto& s = states[v][i];
      if (automata[model.dpds_of(s.config.control)].accepting(s.ba_state))
        accepting[c][i] = true;
    }
    for (const auto& e : edges[v])
      if (scc.component[e.to] == c) steps[c][e.slot] = true;
  }
  for (std::uint32_t c = 0; c < scc.count; ++c) {
    if (width[c] == 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < width[c] && ok; ++i)
      ok = steps[c][i] && accepting[c][i];
    if (ok) {
      result.satisfied = true;
      break;
    }
  }
  return result;
}

}  // namespace ldpn
