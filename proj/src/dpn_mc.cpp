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

#include "ldpn/dpn_mc.hpp"

#include <algorithm>
#include <deque>
#include <tuple>
#include <unordered_map>

#include "ldpn/error.hpp"
#include "ldpn/graph.hpp"

namespace ldpn {

namespace {

using Label = std::uint64_t;

std::uint64_t key(std::uint32_t state, Symbol symbol) {
  return (std::uint64_t{state} << 32) | symbol;
}

// Labeled pre* saturation over a product with pushes of length at most two.
// Each transition (s, a, t) keeps an antichain of labels under `dominates`;
// a path's label is the union of its parts.
class Saturation {
 public:
  struct Entry {
    std::uint32_t to;
    Label label;
  };
  using Dominates = bool (*)(Label, Label);

  Saturation(const BuchiDpds& b, const DclicMask* allowed, Dominates dominates,
             std::function<Label(const BuchiDpds::ProductRule&)> rule_label)
      : b_(b), dominates_(dominates), rule_label_(std::move(rule_label)) {
    for (std::uint32_t i = 0; i < b.rules.size(); ++i) {
      const auto& r = b.rules[i];
      if (r.spawn && allowed && !(*allowed)[*r.spawn]) continue;
      if (r.push.empty()) initial_pops_.push_back(i);
      else by_target_[key(r.to, r.push[0])].push_back(i);
    }
  }

  void add(std::uint32_t from, Symbol symbol, std::uint32_t to, Label label) {
    work_.push_back({from, symbol, to, label});
  }

  void run() {
    for (auto i : initial_pops_) {
      const auto& r = b_.rules[i];
      add(r.from, r.symbol, r.to, rule_label_(r));
    }
    while (!work_.empty()) {
      const Item t = work_.front();
      work_.pop_front();
      if (!insert(t)) continue;
      const auto it = by_target_.find(key(t.from, t.symbol));
      if (it != by_target_.end()) {
        for (auto ri : it->second) {
          const auto& r = b_.rules[ri];
          const Label lr = rule_label_(r) | t.label;
          if (r.push.size() == 1) {
            add(r.from, r.symbol, t.to, lr);
            continue;
          }
          const auto k = key(t.to, r.push[1]);
          derived_[k].push_back({r.from, r.symbol, lr});
          const auto found = rel_.find(k);
          if (found == rel_.end()) continue;
          const std::vector<Entry> snapshot = found->second;
          for (const auto& e : snapshot) add(r.from, r.symbol, e.to, lr | e.label);
        }
      }
      const auto d = derived_.find(key(t.from, t.symbol));
      if (d != derived_.end()) {
        const std::vector<Derived> snapshot = d->second;
        for (const auto& x : snapshot) add(x.from, x.symbol, t.to, x.label | t.label);
      }
    }
  }

  const std::unordered_map<std::uint64_t, std::vector<Entry>>& relation() const {
    return rel_;
  }

 private:
  struct Item {
    std::uint32_t from;
    Symbol symbol;
    std::uint32_t to;
    Label label;
  };
  struct Derived {
    std::uint32_t from;
    Symbol symbol;
    Label label;
  };

  bool insert(const Item& t) {
    auto& entries = rel_[key(t.from, t.symbol)];
    for (const auto& e : entries)
      if (e.to == t.to && dominates_(e.label, t.label)) return false;
    entries.push_back({t.to, t.label});
    return true;
  }

  const BuchiDpds& b_;
  Dominates dominates_;
  std::function<Label(const BuchiDpds::ProductRule&)> rule_label_;
  std::vector<std::uint32_t> initial_pops_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_target_;
  std::unordered_map<std::uint64_t, std::vector<Derived>> derived_;
  std::unordered_map<std::uint64_t, std::vector<Entry>> rel_;
  std::deque<Item> work_;
};

bool superset(Label a, Label b) { return (a | b) == a; }
bool subset(Label a, Label b) { return (a & ~b) == 0; }
bool always(Label, Label) { return true; }

std::size_t symbol_index(const BuchiDpds& b, Symbol s) {
  return static_cast<std::size_t>(
      std::lower_bound(b.alphabet.begin(), b.alphabet.end(), s) -
      b.alphabet.begin());
}

// Repeating heads as flags over control * |alphabet| + symbol index.
std::vector<char> repeating_flags(const BuchiDpds& b, const DclicMask& allowed) {
  Saturation pops(b, &allowed, superset, [&](const BuchiDpds::ProductRule& r) {
    return Label{b.accepting[r.from] ? 1u : 0u};
  });
  pops.run();
  const auto& pop = pops.relation();

  const std::size_t width = b.alphabet.size();
  const std::size_t nodes = b.control_count() * width;
  std::vector<std::vector<std::uint32_t>> succ(nodes);
  struct Edge {
    std::uint32_t from, to;
    bool accepting;
  };
  std::vector<Edge> edges;
  const auto node = [&](std::uint32_t c, Symbol s) {
    return static_cast<std::uint32_t>(c * width + symbol_index(b, s));
  };
  for (const auto& r : b.rules) {
    if (r.push.empty()) continue;
    if (r.spawn && !allowed[*r.spawn]) continue;
    const auto u = node(r.from, r.symbol);
    const bool acc = b.accepting[r.from];
    edges.push_back({u, node(r.to, r.push[0]), acc});
    if (r.push.size() == 2) {
      const auto it = pop.find(key(r.to, r.push[0]));
      if (it == pop.end()) continue;
      for (const auto& e : it->second)
        edges.push_back({u, node(e.to, r.push[1]), acc || e.label != 0});
    }
  }
  for (const auto& e : edges) succ[e.from].push_back(e.to);
  const auto scc = strongly_connected_components(succ);
  std::vector<char> good(scc.count, 0);
  for (const auto& e : edges)
    if (e.accepting && scc.component[e.from] == scc.component[e.to])
      good[scc.component[e.from]] = 1;
  std::vector<char> out(nodes, 0);
  for (std::size_t v = 0; v < nodes; ++v) out[v] = good[scc.component[v]];
  return out;
}

std::string product_state_name(const LockDpnModel& dpn, const BuchiDpds& b,
                               std::uint32_t c) {
  if (c >= b.base_controls) return "h" + std::to_string(c - b.base_controls);
  return dpn.controls()[b.source_control[c]] + "/" +
         std::to_string(c % b.ba_states);
}

}  // namespace

HeadLabeling simple_labeling(const LockDpnModel& dpn) {
  if (dpn.valuation().kind != ValuationKind::kSimple)
    throw ValidationError("simple_labeling: valuation is not simple");
  std::vector<PropSet> per_control(dpn.controls().size(), 0);
  for (ControlId c = 0; c < dpn.controls().size(); ++c)
    per_control[c] = label_of(dpn, LocalConfiguration{c, {}, {}});
  return [per_control](ControlId c, Symbol) { return per_control[c]; };
}

BuchiDpds build_bpds(const LockDpnModel& dpn, std::size_t d,
                     const BuchiAutomaton& ba, const HeadLabeling& labels) {
  const Dpds& sys = dpn.dpds().at(d);
  BuchiDpds b;
  b.dpds = d;
  b.ba_states = ba.state_count();
  b.initial_ba_state = ba.initial();
  b.alphabet = sys.alphabet;
  b.entry.assign(dpn.controls().size(), kNoControl);
  std::vector<std::uint32_t> local(dpn.controls().size(), kNoControl);
  for (std::uint32_t i = 0; i < sys.controls.size(); ++i) {
    local[sys.controls[i]] = i;
    b.entry[sys.controls[i]] = b.control(i, ba.initial());
    for (std::uint32_t g = 0; g < ba.state_count(); ++g) {
      b.source_control.push_back(sys.controls[i]);
      b.accepting.push_back(ba.accepting(g));
    }
  }
  b.base_controls = b.source_control.size();

  const auto helper = [&](ControlId source) {
    b.source_control.push_back(source);
    b.accepting.push_back(false);
    return static_cast<std::uint32_t>(b.source_control.size() - 1);
  };
  for (auto ri : sys.rules) {
    const Rule& r = dpn.rules()[ri];
    const PropSet letter = labels(r.from, r.symbol);
    for (std::uint32_t g = 0; g < ba.state_count(); ++g) {
      for (auto g2 : ba.successors(g, letter)) {
        const auto from = b.control(local[r.from], g);
        const auto to = b.control(local[r.to], g2);
        const auto& w = r.push;
        if (w.size() <= 2) {
          b.rules.push_back({from, r.symbol, to, w, r.spawn, ri});
          continue;
        }
        // p a -> q w1..wk becomes p a -> h1 w(k-1) wk, h1 w(k-1) -> h2
        // w(k-2) w(k-1), ..., h(k-2) w2 -> q w1 w2.
        const std::size_t k = w.size();
        std::uint32_t h = helper(r.to);
        b.rules.push_back({from, r.symbol, h, {w[k - 2], w[k - 1]}, r.spawn, ri});
        for (std::size_t j = k - 2; j >= 2; --j) {
          const std::uint32_t next = helper(r.to);
          b.rules.push_back({h, w[j], next, {w[j - 1], w[j]}, std::nullopt, ri});
          h = next;
        }
        b.rules.push_back({h, w[1], to, {w[0], w[1]}, std::nullopt, ri});
      }
    }
  }
  return b;
}

DclicMask all_dclics(const LockDpnModel& dpn) {
  return DclicMask(dpn.dclics().size(), 1);
}

std::vector<Head> repeating_heads(const BuchiDpds& b, const DclicMask& allowed) {
  const auto flags = repeating_flags(b, allowed);
  std::vector<Head> out;
  const std::size_t width = b.alphabet.size();
  for (std::size_t v = 0; v < flags.size(); ++v)
    if (flags[v])
      out.push_back({static_cast<std::uint32_t>(v / width), b.alphabet[v % width]});
  return out;
}

AcceptingSet accepting_set(const BuchiDpds& b, const DclicMask& allowed) {
  const auto flags = repeating_flags(b, allowed);
  const auto final_state = static_cast<std::uint32_t>(b.control_count());
  Saturation sat(b, &allowed, always,
                 [](const BuchiDpds::ProductRule&) { return Label{0}; });
  const std::size_t width = b.alphabet.size();
  for (std::size_t v = 0; v < flags.size(); ++v)
    if (flags[v])
      sat.add(static_cast<std::uint32_t>(v / width), b.alphabet[v % width],
              final_state, 0);
  for (Symbol s : b.alphabet) sat.add(final_state, s, final_state, 0);
  sat.run();

  AcceptingSet out;
  out.states_ = b.control_count() + 1;
  out.final_ = final_state;
  out.out_.resize(out.states_);
  for (const auto& [k, entries] : sat.relation()) {
    const auto from = static_cast<std::uint32_t>(k >> 32);
    const auto symbol = static_cast<Symbol>(k & 0xffffffffu);
    for (const auto& e : entries) out.out_[from].emplace_back(symbol, e.to);
  }
  for (auto& v : out.out_) std::sort(v.begin(), v.end());
  return out;
}

bool AcceptingSet::accepts(std::uint32_t control, const Stack& stack) const {
  if (control >= states_) return false;
  std::vector<char> current(states_, 0);
  current[control] = 1;
  for (Symbol s : stack) {
    if (current[final_]) return true;
    std::vector<char> next(states_, 0);
    bool any = false;
    for (std::uint32_t q = 0; q < states_; ++q) {
      if (!current[q]) continue;
      const auto& v = out_[q];
      auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(s, 0u));
      for (; it != v.end() && it->first == s; ++it) {
        next[it->second] = 1;
        any = true;
      }
    }
    if (!any) return false;
    current = std::move(next);
  }
  return current[final_] != 0;
}

std::size_t AcceptingSet::transition_count() const {
  std::size_t n = 0;
  for (const auto& v : out_) n += v.size();
  return n;
}

bool accepting_from(const BuchiDpds& b, const LocalConfiguration& c,
                    const DclicMask& allowed) {
  if (c.control >= b.entry.size() || b.entry[c.control] == kNoControl)
    throw ValidationError("accepting_from: control outside the system");
  return accepting_set(b, allowed).accepts(b.entry[c.control], c.stack);
}

DfpResult compute_dfp(const LockDpnModel& dpn,
                      const std::vector<BuchiDpds>& products, bool parallel) {
  DfpResult out;
  out.members = all_dclics(dpn);
  std::vector<std::vector<std::uint32_t>> by_dpds(products.size());
  for (std::uint32_t i = 0; i < dpn.dclics().size(); ++i)
    by_dpds[dpn.dpds_of(dpn.dclics()[i].control)].push_back(i);
  const auto count = static_cast<std::int64_t>(products.size());
  while (true) {
    ++out.rounds;
    DclicMask next = out.members;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (std::int64_t d = 0; d < count; ++d) {
      if (by_dpds[d].empty()) continue;
      const auto& b = products[d];
      const AcceptingSet acc = accepting_set(b, out.members);
      for (auto i : by_dpds[d]) {
        if (!out.members[i]) continue;
        const Dclic& c = dpn.dclics()[i];
        next[i] = acc.accepts(b.entry[c.control], c.stack) ? 1 : 0;
      }
    }
    if (next == out.members) break;
    out.members = std::move(next);
  }
  return out;
}

bool check_config(const std::vector<BuchiDpds>& products,
                  const LockDpnModel& dpn, const DclicMask& dfp,
                  const LocalConfiguration& c) {
  return accepting_from(products.at(dpn.dpds_of(c.control)), c, dfp);
}

std::vector<BuchiDpds> build_products(const LockDpnModel& dpn,
                                      const std::vector<BuchiAutomaton>& automata,
                                      const HeadLabeling& labels) {
  if (automata.size() != dpn.dpds().size())
    throw ValidationError("expected one automaton per system");
  std::vector<BuchiDpds> out;
  for (std::size_t d = 0; d < automata.size(); ++d)
    out.push_back(build_bpds(dpn, d, automata[d], labels));
  return out;
}

MultiAutomaton build_result_ma(const LockDpnModel& dpn, const BuchiDpds& b) {
  std::vector<std::uint32_t> relevant;
  for (const auto& r : b.rules)
    if (r.spawn) relevant.push_back(*r.spawn);
  std::sort(relevant.begin(), relevant.end());
  relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());
  if (relevant.size() > kResultMaDclicCap)
    throw ResourceLimit("result automaton: system spawns " +
                        std::to_string(relevant.size()) + " DCLICs, cap is " +
                        std::to_string(kResultMaDclicCap));
  if (dpn.dclics().size() > kMaxAnnotatedDclics)
    throw ResourceLimit("result automaton: more than 64 DCLICs");

  // Minimal spawn sets under which each head repeats.
  const std::size_t width = b.alphabet.size();
  std::vector<std::vector<Label>> minimal(b.control_count() * width);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << relevant.size());
       ++code) {
    DclicMask mask(dpn.dclics().size(), 0);
    Label set = 0;
    for (std::size_t i = 0; i < relevant.size(); ++i)
      if ((code >> i) & 1u) {
        mask[relevant[i]] = 1;
        set |= Label{1} << relevant[i];
      }
    const auto flags = repeating_flags(b, mask);
    for (std::size_t v = 0; v < flags.size(); ++v) {
      if (!flags[v]) continue;
      auto& m = minimal[v];
      if (std::any_of(m.begin(), m.end(), [&](Label x) { return subset(x, set); }))
        continue;
      std::erase_if(m, [&](Label x) { return subset(set, x); });
      m.push_back(set);
    }
  }

  const auto final_state = static_cast<std::uint32_t>(b.control_count());
  Saturation sat(b, nullptr, subset, [](const BuchiDpds::ProductRule& r) {
    return r.spawn ? Label{1} << *r.spawn : Label{0};
  });
  for (std::size_t v = 0; v < minimal.size(); ++v)
    for (Label s : minimal[v])
      sat.add(static_cast<std::uint32_t>(v / width), b.alphabet[v % width],
              final_state, s);
  for (Symbol s : b.alphabet) sat.add(final_state, s, final_state, 0);
  sat.run();

  MultiAutomaton ma;
  for (std::uint32_t c = 0; c < b.control_count(); ++c)
    ma.state_names.push_back(product_state_name(dpn, b, c));
  ma.state_names.push_back("accept");
  ma.accepting.assign(ma.state_names.size(), false);
  ma.accepting[final_state] = true;
  for (ControlId p : dpn.dpds()[b.dpds].controls)
    ma.initials.push_back({b.entry[p], p, std::nullopt});
  std::vector<std::uint64_t> keys;
  for (const auto& [k, entries] : sat.relation()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (auto k : keys) {
    auto entries = sat.relation().at(k);
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
      return std::tie(x.to, x.label) < std::tie(y.to, y.label);
    });
    for (const auto& e : entries)
      ma.transitions.push_back({static_cast<std::uint32_t>(k >> 32),
                                static_cast<Symbol>(k & 0xffffffffu), e.label,
                                e.to});
  }

  // drop transitions off every accepting path from an initial state
  const std::size_t n = ma.state_names.size();
  std::vector<bool> reach(n, false), live(n, false);
  for (const auto& i : ma.initials) reach[i.state] = true;
  live[final_state] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : ma.transitions) {
      if (reach[t.from] && !reach[t.to]) reach[t.to] = changed = true;
      if (live[t.to] && !live[t.from]) live[t.from] = changed = true;
    }
  }
  std::erase_if(ma.transitions, [&](const MaTransition& t) {
    return !reach[t.from] || !live[t.to];
  });
  return ma;
}

bool ma_member_within(const MultiAutomaton& ma, const LocalConfiguration& c,
                      const DclicMask& dfp) {
  DclicSet within = 0;
  for (std::size_t i = 0; i < dfp.size() && i < kMaxAnnotatedDclics; ++i)
    if (dfp[i]) within |= DclicSet{1} << i;
  for (DclicSet d : ma_accepts(ma, c.control, c.locks, c.stack))
    if ((d & ~within) == 0) return true;
  return false;
}

}  // namespace ldpn
