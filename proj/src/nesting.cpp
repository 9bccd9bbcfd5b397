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

#include "ldpn/nesting.hpp"

#include <algorithm>
#include <map>

namespace ldpn {

namespace {

std::string order_name(const LockDpnModel& m, ControlId p,
                       const std::vector<LockId>& order) {
  std::string out = m.controls()[p] + "[";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ",";
    out += m.locks()[order[i]];
  }
  return out + "]";
}

}  // namespace

NestedModel enforce_nesting(const LockDpnModel& m) {
  using Key = std::pair<ControlId, std::vector<LockId>>;
  std::map<Key, ControlId> ids;
  std::vector<Key> keys;
  const auto intern = [&](ControlId p, std::vector<LockId> order) {
    Key k{p, std::move(order)};
    auto [it, inserted] = ids.emplace(k, static_cast<ControlId>(keys.size()));
    if (inserted) keys.push_back(std::move(k));
    return it->second;
  };
  for (ControlId p = 0; p < m.controls().size(); ++p) intern(p, {});

  struct NewRule {
    ControlId from;
    std::uint32_t source;
    ControlId to;
  };
  std::vector<NewRule> rules;
  NestedModel out;
  std::vector<std::vector<std::uint32_t>> rules_by_control(m.controls().size());
  for (std::uint32_t r = 0; r < m.rules().size(); ++r)
    rules_by_control[m.rules()[r].from].push_back(r);

  for (ControlId id = 0; id < keys.size(); ++id) {
    const auto [p, order] = keys[id];
    for (auto ri : rules_by_control[p]) {
      const Rule& r = m.rules()[ri];
      std::vector<LockId> next = order;
      if (r.action.kind == ActionKind::kAcquire) {
        if (std::find(next.begin(), next.end(), r.action.lock) != next.end()) {
          ++out.dropped_rules;
          continue;
        }
        next.push_back(r.action.lock);
      } else if (r.action.kind == ActionKind::kRelease && !next.empty()) {
        if (next.back() != r.action.lock) {
          ++out.dropped_rules;
          continue;
        }
        next.pop_back();
      }
      rules.push_back({id, ri, intern(r.to, std::move(next))});
    }
  }

  ModelBuilder b;
  for (const auto& l : m.locks()) b.add_lock(l);
  for (const auto& a : m.props()) b.add_prop(a);
  for (const auto& d : m.dpds()) b.add_dpds(d.name);
  // Same interning order as the source, so symbol ids carry over.
  for (Symbol s = 0; s < m.symbols().size(); ++s)
    for (std::size_t d = 0; d < m.dpds().size(); ++d)
      if (m.in_alphabet(d, s)) b.add_symbol(d, m.symbols()[s]);
  for (ControlId id = 0; id < keys.size(); ++id) {
    const auto& [p, order] = keys[id];
    b.add_control(m.dpds_of(p), order_name(m, p, order));
    out.source_control.push_back(p);
    out.order.push_back(order);
  }
  const auto sym = [&](Symbol s) { return *b.find_symbol(m.symbols()[s]); };
  const auto syms = [&](const Stack& st) {
    Stack o;
    for (auto s : st) o.push_back(sym(s));
    return o;
  };
  for (const auto& nr : rules) {
    const Rule& r = m.rules()[nr.source];
    std::optional<Dclic> spawn;
    if (r.spawn) {
      const Dclic& d = m.dclics()[*r.spawn];
      spawn = Dclic{ids.at({d.control, {}}), syms(d.stack)};
    }
    b.add_rule(nr.from, sym(r.symbol), r.action, nr.to, syms(r.push), spawn);
  }

  Valuation v;
  v.kind = m.valuation().kind;
  if (v.kind == ValuationKind::kSimple) {
    v.simple.resize(m.props().size());
    for (std::size_t a = 0; a < m.props().size(); ++a)
      for (const auto& e : m.valuation().simple[a])
        for (ControlId id = 0; id < keys.size(); ++id)
          if (keys[id].first == e.control) v.simple[a].push_back({id, e.locks});
  } else {
    for (const auto& ma : m.valuation().regular) {
      MultiAutomaton lifted = ma;
      lifted.initials.clear();
      for (const auto& i : ma.initials)
        for (ControlId id = 0; id < keys.size(); ++id)
          if (keys[id].first == i.control)
            lifted.initials.push_back({i.state, id, i.locks});
      for (auto& t : lifted.transitions) t.symbol = sym(t.symbol);
      v.regular.push_back(std::move(lifted));
    }
  }
  b.set_valuation(std::move(v));
  if (const auto& init = m.initial())
    b.set_initial({ids.at({init->control, {}}), syms(init->stack), init->locks});
  out.model = std::move(b).build();
  return out;
}

}  // namespace ldpn
