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

#include "ldpn/regular.hpp"

#include <bit>
#include <deque>

#include "ldpn/error.hpp"

namespace ldpn {

std::vector<std::uint64_t> RegularAnnotation::step(Symbol symbol,
                                                   std::uint32_t under) const {
  std::vector<std::uint64_t> out(predecessors.size(), 0);
  for (std::size_t a = 0; a < predecessors.size(); ++a) {
    const auto& pre = predecessors[a][symbol];
    std::uint64_t set = tuples[under][a];
    while (set) {
      const int q = std::countr_zero(set);
      set &= set - 1;
      out[a] |= pre[q];
    }
  }
  return out;
}

HeadLabeling RegularAnnotation::labeling() const {
  std::vector<std::vector<PropSet>> table(dpn.controls().size(),
                                          std::vector<PropSet>(base_symbol.size()));
  for (Symbol s = 0; s < base_symbol.size(); ++s) {
    const auto states = step(base_symbol[s], below[s]);
    for (ControlId c = 0; c < dpn.controls().size(); ++c)
      for (std::size_t a = 0; a < states.size(); ++a)
        if (initial_states[a][c] & states[a]) table[c][s] |= PropSet{1} << a;
  }
  return [table](ControlId c, Symbol s) { return table[c][s]; };
}

std::optional<Stack> RegularAnnotation::annotate(const Stack& stack) const {
  Stack out(stack.size());
  std::uint32_t under = 0;  // tuple 0 is the empty stack
  for (std::size_t i = stack.size(); i-- > 0;) {
    const auto it = index.find({stack[i], under});
    if (it == index.end()) return std::nullopt;
    out[i] = it->second;
    const auto t = tuple_index.find(step(stack[i], under));
    if (t == tuple_index.end()) {
      if (i == 0) break;
      return std::nullopt;
    }
    under = t->second;
  }
  return out;
}

RegularAnnotation annotate_regular(const LockDpnModel& dpn,
                                   const std::vector<Stack>& seeds,
                                   std::size_t cap) {
  const Valuation& v = dpn.valuation();
  if (v.kind != ValuationKind::kRegular)
    throw ValidationError("annotate_regular: valuation is not regular");
  RegularAnnotation out;
  const std::size_t props = v.regular.size();
  const std::size_t symbols = dpn.symbols().size();

  std::vector<std::uint64_t> bottom(props, 0);
  out.initial_states.assign(props, std::vector<std::uint64_t>(dpn.controls().size(), 0));
  out.predecessors.resize(props);
  for (std::size_t a = 0; a < props; ++a) {
    const MultiAutomaton& ma = v.regular[a];
    if (ma.state_count() > 64)
      throw ResourceLimit("annotate_regular: automaton with more than 64 states");
    for (std::uint32_t q = 0; q < ma.state_count(); ++q)
      if (ma.accepting[q]) bottom[a] |= std::uint64_t{1} << q;
    for (const auto& i : ma.initials)
      if (!i.locks || i.locks->empty())
        out.initial_states[a][i.control] |= std::uint64_t{1} << i.state;
    out.predecessors[a].assign(symbols, std::vector<std::uint64_t>(ma.state_count(), 0));
    for (const auto& t : ma.transitions)
      if (t.dclics == 0) out.predecessors[a][t.symbol][t.to] |= std::uint64_t{1} << t.from;
  }

  const auto tuple_id = [&](std::vector<std::uint64_t> t) {
    auto [it, inserted] = out.tuple_index.emplace(
        std::move(t), static_cast<std::uint32_t>(out.tuples.size()));
    if (inserted) out.tuples.push_back(it->first);
    return it->second;
  };
  tuple_id(bottom);

  std::deque<Symbol> work;
  const auto symbol_id = [&](Symbol s, std::uint32_t under) {
    auto [it, inserted] = out.index.emplace(
        std::make_pair(s, under), static_cast<Symbol>(out.base_symbol.size()));
    if (inserted) {
      if (out.base_symbol.size() >= cap)
        throw ResourceLimit("annotate_regular: more than " + std::to_string(cap) +
                            " annotated symbols");
      out.base_symbol.push_back(s);
      out.below.push_back(under);
      work.push_back(it->second);
    }
    return it->second;
  };
  // Annotates `stack` sitting on a stack with tuple `under`.
  const auto annotate_on = [&](const Stack& stack, std::uint32_t under) {
    Stack o(stack.size());
    for (std::size_t i = stack.size(); i-- > 0;) {
      o[i] = symbol_id(stack[i], under);
      if (i > 0) under = tuple_id(out.step(stack[i], under));
    }
    return o;
  };

  for (const auto& s : seeds) annotate_on(s, 0);
  for (const auto& d : dpn.dclics()) annotate_on(d.stack, 0);
  if (dpn.initial()) annotate_on(dpn.initial()->stack, 0);

  std::vector<std::vector<std::uint32_t>> rules_by_symbol(symbols);
  for (std::uint32_t r = 0; r < dpn.rules().size(); ++r)
    rules_by_symbol[dpn.rules()[r].symbol].push_back(r);

  struct Instance {
    std::uint32_t rule;
    Symbol head;
    Stack push;
    std::optional<Stack> spawn;
  };
  std::vector<Instance> instances;
  while (!work.empty()) {
    const Symbol head = work.front();
    work.pop_front();
    const Symbol base = out.base_symbol[head];
    const std::uint32_t under = out.below[head];
    for (auto ri : rules_by_symbol[base]) {
      const Rule& r = dpn.rules()[ri];
      Instance inst{ri, head, annotate_on(r.push, under), std::nullopt};
      if (r.spawn) inst.spawn = annotate_on(dpn.dclics()[*r.spawn].stack, 0);
      instances.push_back(std::move(inst));
    }
  }

  ModelBuilder b;
  for (const auto& l : dpn.locks()) b.add_lock(l);
  for (const auto& a : dpn.props()) b.add_prop(a);
  for (const auto& d : dpn.dpds()) b.add_dpds(d.name);
  for (ControlId c = 0; c < dpn.controls().size(); ++c)
    b.add_control(dpn.dpds_of(c), dpn.controls()[c]);
  for (Symbol s = 0; s < out.base_symbol.size(); ++s) {
    const std::string name = dpn.symbols()[out.base_symbol[s]] + "@" +
                             std::to_string(out.below[s]);
    for (std::size_t d = 0; d < dpn.dpds().size(); ++d)
      if (dpn.in_alphabet(d, out.base_symbol[s])) b.add_symbol(d, name);
  }
  for (const auto& inst : instances) {
    const Rule& r = dpn.rules()[inst.rule];
    std::optional<Dclic> spawn;
    if (inst.spawn) spawn = Dclic{dpn.dclics()[*r.spawn].control, *inst.spawn};
    b.add_rule(r.from, inst.head, r.action, r.to, inst.push, spawn);
  }
  Valuation empty;
  empty.simple.resize(dpn.props().size());
  b.set_valuation(std::move(empty));
  if (const auto& init = dpn.initial())
    b.set_initial({init->control, *out.annotate(init->stack), init->locks});
  out.dpn = std::move(b).build();
  return out;
}

}  // namespace ldpn
