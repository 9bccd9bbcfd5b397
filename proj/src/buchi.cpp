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

#include "ldpn/buchi.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "ldpn/error.hpp"
#include "ldpn/graph.hpp"

namespace ldpn {

BuchiAutomaton::BuchiAutomaton(std::vector<std::string> props,
                               std::size_t state_count,
                               std::vector<BuchiTransition> transitions,
                               std::uint32_t initial,
                               std::vector<bool> accepting)
    : props_(std::move(props)),
      state_count_(state_count),
      transitions_(std::move(transitions)),
      outgoing_(state_count),
      initial_(initial),
      accepting_(std::move(accepting)) {
  if (props_.size() > kMaxProps)
    throw ValidationError("Büchi automaton: more than 64 propositions");
  if (initial_ >= state_count_)
    throw ValidationError("Büchi automaton: initial state out of range");
  if (accepting_.size() != state_count_)
    throw ValidationError("Büchi automaton: accepting vector size mismatch");
  const PropSet mask = alphabet_mask();
  for (std::uint32_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (t.from >= state_count_ || t.to >= state_count_)
      throw ValidationError("Büchi automaton: transition endpoint out of range");
    if (((t.guard.positive | t.guard.negative) & ~mask) != 0)
      throw ValidationError("Büchi automaton: guard outside the alphabet");
    outgoing_[t.from].push_back(i);
  }
}

bool BuchiAutomaton::has_accepting_state() const {
  return std::find(accepting_.begin(), accepting_.end(), true) !=
         accepting_.end();
}

PropSet BuchiAutomaton::alphabet_mask() const {
  return props_.size() >= 64 ? ~PropSet{0}
                             : (PropSet{1} << props_.size()) - 1;
}

std::optional<std::size_t> BuchiAutomaton::prop_index(
    const std::string& name) const {
  const auto it = std::find(props_.begin(), props_.end(), name);
  if (it == props_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - props_.begin());
}

std::vector<std::uint32_t> BuchiAutomaton::successors(std::uint32_t state,
                                                      PropSet letter) const {
  std::vector<std::uint32_t> out;
  for (auto t : outgoing_[state])
    if (transitions_[t].guard.matches(letter)) out.push_back(transitions_[t].to);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

using FormulaSet = std::set<LtlFormula, LtlLess>;

struct Expansion {
  Guard guard;
  FormulaSet next;
  std::uint64_t marks;  // bit k: the k-th until is not postponed
};

class Tableau {
 public:
  Tableau(const LtlFormula& root, const std::vector<std::string>& props)
      : props_(props) {
    collect_untils(root);
  }

  std::size_t until_count() const { return untils_.size(); }

  std::vector<Expansion> expand(const FormulaSet& obligations) const {
    std::vector<Expansion> out;
    Branch b;
    b.todo.assign(obligations.begin(), obligations.end());
    run(std::move(b), out);
    std::sort(out.begin(), out.end(), [](const Expansion& x, const Expansion& y) {
      if (x.guard.positive != y.guard.positive)
        return x.guard.positive < y.guard.positive;
      if (x.guard.negative != y.guard.negative)
        return x.guard.negative < y.guard.negative;
      if (x.marks != y.marks) return x.marks < y.marks;
      return std::lexicographical_compare(x.next.begin(), x.next.end(),
                                          y.next.begin(), y.next.end(),
                                          LtlLess{});
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Expansion& x, const Expansion& y) {
                            return x.guard == y.guard && x.marks == y.marks &&
                                   x.next.size() == y.next.size() &&
                                   std::equal(x.next.begin(), x.next.end(),
                                              y.next.begin());
                          }),
              out.end());
    return out;
  }

 private:
  struct Branch {
    std::vector<LtlFormula> todo;
    FormulaSet processed;
    Guard guard;
    FormulaSet next;
    std::uint64_t postponed = 0;
  };

  void collect_untils(const LtlFormula& f) {
    if (f.kind() == LtlKind::kUntil &&
        std::find(untils_.begin(), untils_.end(), f) == untils_.end())
      untils_.push_back(f);
    if (f.arity() >= 1) collect_untils(f.left());
    if (f.arity() == 2) collect_untils(f.right());
  }

  std::size_t until_index(const LtlFormula& f) const {
    return static_cast<std::size_t>(
        std::find(untils_.begin(), untils_.end(), f) - untils_.begin());
  }

  PropSet prop_bit(const std::string& name) const {
    const auto it = std::find(props_.begin(), props_.end(), name);
    return PropSet{1} << (it - props_.begin());
  }

  void run(Branch b, std::vector<Expansion>& out) const {
    while (!b.todo.empty()) {
      LtlFormula f = b.todo.back();
      b.todo.pop_back();
      if (!b.processed.insert(f).second) continue;
      switch (f.kind()) {
        case LtlKind::kTrue:
          break;
        case LtlKind::kFalse:
          return;
        case LtlKind::kAtom:
          b.guard.positive |= prop_bit(f.name());
          if (b.guard.positive & b.guard.negative) return;
          break;
        case LtlKind::kNot:
          b.guard.negative |= prop_bit(f.left().name());
          if (b.guard.positive & b.guard.negative) return;
          break;
        case LtlKind::kAnd:
          b.todo.push_back(f.left());
          b.todo.push_back(f.right());
          break;
        case LtlKind::kOr: {
          Branch other = b;
          other.todo.push_back(f.right());
          run(std::move(other), out);
          b.todo.push_back(f.left());
          break;
        }
        case LtlKind::kNext:
          if (f.left().kind() != LtlKind::kTrue) b.next.insert(f.left());
          break;
        case LtlKind::kUntil: {
          Branch other = b;
          other.todo.push_back(f.left());
          other.next.insert(f);
          other.postponed |= std::uint64_t{1} << until_index(f);
          run(std::move(other), out);
          b.todo.push_back(f.right());
          break;
        }
        case LtlKind::kRelease: {
          Branch other = b;
          other.todo.push_back(f.right());
          other.next.insert(f);
          run(std::move(other), out);
          b.todo.push_back(f.left());
          b.todo.push_back(f.right());
          break;
        }
      }
    }
    const std::uint64_t all =
        untils_.size() >= 64 ? ~std::uint64_t{0}
                             : (std::uint64_t{1} << untils_.size()) - 1;
    out.push_back({b.guard, std::move(b.next), all & ~b.postponed});
  }

  const std::vector<std::string>& props_;
  std::vector<LtlFormula> untils_;
};

struct SetLess {
  bool operator()(const FormulaSet& a, const FormulaSet& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        LtlLess{});
  }
};

}  // namespace

BuchiAutomaton build_buchi(const LtlFormula& formula,
                           std::vector<std::string> props) {
  for (const auto& a : atoms(formula))
    if (std::find(props.begin(), props.end(), a) == props.end())
      throw ValidationError("formula uses undeclared proposition '" + a + "'");
  if (props.size() > kMaxProps)
    throw ValidationError("more than 64 propositions");

  const LtlFormula root = to_nnf(formula);
  const Tableau tableau(root, props);
  if (tableau.until_count() > 63)
    throw ResourceLimit("formula has more than 63 until operators");

  // Generalized automaton over obligation sets, explored from {root}.
  std::map<FormulaSet, std::uint32_t, SetLess> ids;
  std::vector<FormulaSet> sets;
  struct GTransition {
    std::uint32_t from;
    Guard guard;
    std::uint32_t to;
    std::uint64_t marks;
  };
  std::vector<GTransition> gtrans;
  const auto intern = [&](FormulaSet s) {
    s.erase(LtlFormula::truth());
    auto [it, inserted] = ids.emplace(s, static_cast<std::uint32_t>(sets.size()));
    if (inserted) sets.push_back(std::move(s));
    return it->second;
  };
  intern(FormulaSet{root});
  for (std::uint32_t q = 0; q < sets.size(); ++q) {
    for (auto& e : tableau.expand(sets[q])) {
      const std::uint32_t to = intern(std::move(e.next));
      gtrans.push_back({q, e.guard, to, e.marks});
    }
  }

  // Counter degeneralization; level k means every set was just seen.
  const std::size_t k = tableau.until_count();
  std::map<std::pair<std::uint32_t, std::size_t>, std::uint32_t> states;
  std::vector<std::pair<std::uint32_t, std::size_t>> order;
  std::vector<std::vector<std::uint32_t>> gout(sets.size());
  for (std::uint32_t i = 0; i < gtrans.size(); ++i)
    gout[gtrans[i].from].push_back(i);
  const auto state_of = [&](std::uint32_t q, std::size_t level) {
    auto [it, inserted] =
        states.emplace(std::make_pair(q, level),
                       static_cast<std::uint32_t>(order.size()));
    if (inserted) order.emplace_back(q, level);
    return it->second;
  };
  std::vector<BuchiTransition> transitions;
  state_of(0, 0);
  for (std::uint32_t s = 0; s < order.size(); ++s) {
    const auto [q, level] = order[s];
    for (auto ti : gout[q]) {
      const auto& t = gtrans[ti];
      std::size_t next = level == k ? 0 : level;
      while (next < k && ((t.marks >> next) & 1u)) ++next;
      transitions.push_back({s, t.guard, state_of(t.to, next)});
    }
  }
  std::vector<bool> accepting(order.size());
  for (std::size_t s = 0; s < order.size(); ++s)
    accepting[s] = order[s].second == k;
  return BuchiAutomaton(std::move(props), order.size(), std::move(transitions),
                        0, std::move(accepting));
}

BuchiAutomaton build_buchi(const LtlFormula& formula) {
  return build_buchi(formula, atoms(formula));
}

bool ba_accepts_lasso(const BuchiAutomaton& b, const std::vector<PropSet>& stem,
                      const std::vector<PropSet>& loop) {
  if (loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  const PropSet mask = b.alphabet_mask();
  for (const auto* part : {&stem, &loop})
    for (PropSet letter : *part)
      if (letter & ~mask)
        throw std::invalid_argument("lasso letter outside the alphabet");

  const std::size_t n = stem.size() + loop.size();
  const auto letter_at = [&](std::size_t pos) {
    return pos < stem.size() ? stem[pos] : loop[pos - stem.size()];
  };
  const auto node = [&](std::uint32_t g, std::size_t pos) {
    return static_cast<std::uint32_t>(g * n + pos);
  };
  std::vector<std::vector<std::uint32_t>> succ(b.state_count() * n);
  for (std::uint32_t g = 0; g < b.state_count(); ++g)
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t next = pos + 1 < n ? pos + 1 : stem.size();
      for (auto h : b.successors(g, letter_at(pos)))
        succ[node(g, pos)].push_back(node(h, next));
    }
  const auto seen = reachable_from(succ, {node(b.initial(), 0)});
  const auto scc = strongly_connected_components(succ);
  std::vector<std::size_t> size(scc.count, 0);
  for (auto c : scc.component) ++size[c];
  for (std::uint32_t v = 0; v < succ.size(); ++v) {
    if (!seen[v] || !b.accepting(v / n)) continue;
    const auto c = scc.component[v];
    if (size[c] > 1) return true;
    for (auto w : succ[v])
      if (w == v) return true;
  }
  return false;
}

std::string render_guard(const Guard& guard,
                         const std::vector<std::string>& props) {
  std::string out;
  for (std::size_t i = 0; i < props.size(); ++i) {
    const PropSet bit = PropSet{1} << i;
    if (!((guard.positive | guard.negative) & bit)) continue;
    if (!out.empty()) out += " & ";
    if (guard.negative & bit) out += "!";
    out += props[i];
  }
  return out.empty() ? "true" : out;
}

}  // namespace ldpn
