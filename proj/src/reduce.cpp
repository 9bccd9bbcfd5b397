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

#include "ldpn/reduce.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "ldpn/error.hpp"

namespace ldpn {

namespace {

// Every edge of g leaves a lock in `from` and enters a lock in `to`.
bool edges_within(LockGraph g, LockSet from, LockSet to) {
  for (LockId l = 0; l < kMaxLocks; ++l) {
    const LockSet succ = g.successors(l);
    if (succ.empty()) continue;
    if (!from.contains(l) || !succ.subset_of(to)) return false;
  }
  return true;
}

std::vector<LockSet> subsets(LockSet s) {
  std::vector<LockSet> out;
  const std::uint8_t bits = s.bits();
  std::uint8_t sub = 0;
  do {
    out.emplace_back(sub);
    sub = static_cast<std::uint8_t>((sub - bits) & bits);
  } while (sub != 0);
  return out;
}

// Acyclic subgraphs of from x to.
std::vector<LockGraph> acyclic_subgraphs(LockSet from, LockSet to) {
  std::vector<std::pair<LockId, LockId>> cells;
  for (LockId a : from.members())
    for (LockId b : to.members())
      if (a != b) cells.emplace_back(a, b);
  std::vector<LockGraph> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << cells.size()); ++code) {
    LockGraph g;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if ((code >> i) & 1u) g = g.with_edge(cells[i].first, cells[i].second);
    if (g.acyclic()) out.push_back(g);
  }
  return out;
}

std::vector<std::pair<LockId, LockId>> edges_of(LockGraph g) {
  std::vector<std::pair<LockId, LockId>> out;
  for (LockId a = 0; a < kMaxLocks; ++a)
    for (LockId b : g.successors(a).members()) out.emplace_back(a, b);
  return out;
}

std::optional<AcquisitionStructure> transform(const AcquisitionStructure& m,
                                              const Action& a) {
  switch (a.kind) {
    case ActionKind::kTau: return m;
    case ActionKind::kRelease: return rel_update(m, a.lock);
    case ActionKind::kAcquire: return acq_update(m, a.lock);
  }
  return std::nullopt;
}

// Honest structures for a root holding exactly `held`.
std::vector<AcquisitionStructure> honest_roots(LockSet footprint, LockSet held) {
  std::vector<AcquisitionStructure> out;
  for (LockSet r : subsets(held & footprint))
    for (LockSet u : subsets(footprint))
      for (LockSet a : subsets(footprint))
        for (LockGraph rh : acyclic_subgraphs(u, r))
          for (LockGraph ah : acyclic_subgraphs(a, u)) {
            AcquisitionStructure as{r, rh, u, ah, a, held};
            if (is_consistent(as)) out.push_back(as);
          }
  std::sort(out.begin(), out.end());
  return out;
}

struct Generated {
  std::uint32_t source_rule;
  AcquisitionStructure after;
  std::optional<AcquisitionStructure> spawned;
};

struct Expansion {
  std::vector<Generated> rules;
  std::size_t undefined = 0;
  std::size_t inconsistent = 0;
  std::size_t incompatible = 0;
};

class Splitter {
 public:
  Splitter(const AcquisitionStructure& merged, bool honest, LockSet fp_cont,
           LockSet fp_child)
      : m_(merged), honest_(honest), fp_cont_(fp_cont), fp_child_(fp_child) {
    for (LockId l : merged.usages.members()) elements_.push_back({kU, l, 0});
    for (LockId l : merged.final_acquisitions.members())
      elements_.push_back({kA, l, 0});
    for (auto [a, b] : edges_of(merged.release_graph))
      elements_.push_back({kRH, a, b});
    for (auto [a, b] : edges_of(merged.acquisition_graph))
      elements_.push_back({kAH, a, b});
  }

  // Pairs (continuation, spawned) whose merge is the merged structure.
  void run(std::vector<std::pair<AcquisitionStructure, AcquisitionStructure>>& out,
           std::size_t& inconsistent, std::size_t& incompatible) {
    AcquisitionStructure cont;
    cont.initial_releases = m_.initial_releases;
    cont.initially_held = m_.initially_held;
    recurse(0, cont, AcquisitionStructure{}, out, inconsistent, incompatible);
  }

 private:
  enum Kind { kU, kA, kRH, kAH };
  struct Element {
    Kind kind;
    LockId a, b;
  };

  bool allowed(const Element& e, LockSet fp, bool child) const {
    if (!honest_) return true;
    if (child && e.kind == kRH) return false;  // no initial releases
    return fp.contains(e.a) && (e.kind == kU || e.kind == kA || fp.contains(e.b));
  }

  static void add(AcquisitionStructure& s, const Element& e) {
    switch (e.kind) {
      case kU: s.usages = s.usages.with(e.a); break;
      case kA: s.final_acquisitions = s.final_acquisitions.with(e.a); break;
      case kRH: s.release_graph = s.release_graph.with_edge(e.a, e.b); break;
      case kAH: s.acquisition_graph = s.acquisition_graph.with_edge(e.a, e.b); break;
    }
  }

  void recurse(std::size_t i, const AcquisitionStructure& cont,
               const AcquisitionStructure& child,
               std::vector<std::pair<AcquisitionStructure, AcquisitionStructure>>& out,
               std::size_t& inconsistent, std::size_t& incompatible) {
    if (i == elements_.size()) {
      if (!is_consistent(cont) || !is_consistent(child)) {
        ++inconsistent;
        return;
      }
      if (honest_ && (!is_honest(cont, fp_cont_) || !is_honest(child, fp_child_)))
        return;
      if (!compatible(cont, child)) {
        ++incompatible;
        return;
      }
      out.emplace_back(cont, child);
      return;
    }
    const Element& e = elements_[i];
    const bool to_cont = allowed(e, fp_cont_, false);
    const bool to_child = allowed(e, fp_child_, true);
    if (to_cont) {
      AcquisitionStructure c = cont;
      add(c, e);
      recurse(i + 1, c, child, out, inconsistent, incompatible);
    }
    if (to_child) {
      AcquisitionStructure d = child;
      add(d, e);
      recurse(i + 1, cont, d, out, inconsistent, incompatible);
    }
    if (to_cont && to_child) {
      AcquisitionStructure c = cont, d = child;
      add(c, e);
      add(d, e);
      recurse(i + 1, c, d, out, inconsistent, incompatible);
    }
  }

  AcquisitionStructure m_;
  bool honest_;
  LockSet fp_cont_, fp_child_;
  std::vector<Element> elements_;
};

// Rules leaving the annotated control (p, as): for each source rule from p,
// every predecessor-consistent choice of continuation (and spawn) structure.
Expansion expand_control(const LockDpnModel& m,
                         const std::vector<std::vector<std::uint32_t>>& by_control,
                         const std::vector<LockSet>& fp, bool honest,
                         ControlId p, const AcquisitionStructure& as) {
  Expansion ex;
  const std::size_t n = m.locks().size();
  for (auto ri : by_control[p]) {
    const Rule& r = m.rules()[ri];
    const auto pre = transformer_preimages(as, r.action, n);
    if (pre.empty()) ++ex.undefined;
    for (const auto& merged : pre) {
      if (!r.spawn) {
        if (!is_consistent(merged)) {
          ++ex.inconsistent;
          continue;
        }
        if (honest && !is_honest(merged, fp[r.to])) continue;
        ex.rules.push_back({ri, merged, std::nullopt});
        continue;
      }
      const Dclic& d = m.dclics()[*r.spawn];
      std::vector<std::pair<AcquisitionStructure, AcquisitionStructure>> pairs;
      Splitter(merged, honest, fp[r.to], fp[d.control])
          .run(pairs, ex.inconsistent, ex.incompatible);
      for (auto& [cont, child] : pairs) ex.rules.push_back({ri, cont, child});
    }
  }
  return ex;
}

std::string hex8(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

}  // namespace

std::vector<AcquisitionStructure> transformer_preimages(
    const AcquisitionStructure& after, const Action& action,
    std::size_t lock_count) {
  std::vector<AcquisitionStructure> candidates;
  const LockId l = action.lock;
  switch (action.kind) {
    case ActionKind::kTau:
      candidates.push_back(after);
      break;
    case ActionKind::kRelease: {
      AcquisitionStructure m = after;
      m.initial_releases = after.initial_releases.without(l);
      m.initially_held = after.initially_held.without(l);
      candidates.push_back(m);
      break;
    }
    case ActionKind::kAcquire: {
      // Case 1: an initial release of l became a usage.
      const LockSet column_sources = LockSet::all(lock_count);
      for (LockSet kept : subsets(after.initial_releases)) {
        LockGraph rh = after.release_graph;
        for (LockId t : (after.initial_releases - kept).members())
          rh = LockGraph(rh.bits() & ~LockGraph().with_edge(l, t).bits());
        for (LockSet into : subsets(column_sources)) {
          LockGraph full = rh;
          for (LockId s : into.members()) full = full.with_edge(s, l);
          for (LockSet u : {after.usages, after.usages.without(l)}) {
            AcquisitionStructure m = after;
            m.initial_releases = after.initial_releases.with(l);
            m.initially_held = after.initially_held.with(l);
            m.usages = u;
            m.release_graph = full;
            candidates.push_back(m);
          }
        }
      }
      // Case 2: a final acquisition of l.
      for (LockSet dropped : subsets(after.usages)) {
        LockGraph ah = after.acquisition_graph;
        for (LockId t : dropped.members())
          ah = LockGraph(ah.bits() & ~LockGraph().with_edge(l, t).bits());
        AcquisitionStructure m = after;
        m.initially_held = after.initially_held.with(l);
        m.final_acquisitions = after.final_acquisitions.without(l);
        m.acquisition_graph = ah;
        candidates.push_back(m);
      }
      break;
    }
  }
  std::vector<AcquisitionStructure> out;
  for (const auto& m : candidates) {
    const auto t = transform(m, action);
    if (t && *t == after) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<LockSet> lock_footprints(const LockDpnModel& m) {
  const std::size_t n = m.controls().size();
  std::vector<LockSet> own(n);
  std::vector<std::vector<ControlId>> succ(n);
  for (const auto& r : m.rules()) {
    if (r.action.kind != ActionKind::kTau) own[r.from] = own[r.from].with(r.action.lock);
    succ[r.from].push_back(r.to);
    if (r.spawn) succ[r.from].push_back(m.dclics()[*r.spawn].control);
  }
  std::vector<LockSet> out(n);
  for (ControlId p = 0; p < n; ++p) {
    std::vector<bool> seen(n, false);
    std::vector<ControlId> work{p};
    seen[p] = true;
    LockSet acc;
    while (!work.empty()) {
      const ControlId q = work.back();
      work.pop_back();
      acc = acc | own[q];
      for (auto s : succ[q])
        if (!seen[s]) {
          seen[s] = true;
          work.push_back(s);
        }
    }
    out[p] = acc;
  }
  return out;
}

bool is_honest(const AcquisitionStructure& as, LockSet fp) {
  return as.initial_releases.subset_of(as.initially_held) &&
         (as.initial_releases | as.usages | as.final_acquisitions).subset_of(fp) &&
         edges_within(as.release_graph, as.usages, as.initial_releases) &&
         edges_within(as.acquisition_graph, as.final_acquisitions, as.usages);
}

Valuation lift_valuation(const LockDpnModel& source,
                         const std::vector<ReducedControl>& origin) {
  const Valuation& v = source.valuation();
  Valuation out;
  out.kind = v.kind;
  std::vector<std::vector<ControlId>> by_source(source.controls().size());
  for (ControlId c = 0; c < origin.size(); ++c)
    by_source[origin[c].source].push_back(c);
  if (v.kind == ValuationKind::kSimple) {
    out.simple.resize(source.props().size());
    for (std::size_t a = 0; a < source.props().size(); ++a) {
      std::vector<bool> holds(origin.size(), false);
      for (const auto& e : v.simple[a])
        for (ControlId c : by_source[e.control])
          if (!e.locks || *e.locks == origin[c].as.initially_held) holds[c] = true;
      for (ControlId c = 0; c < origin.size(); ++c)
        if (holds[c]) out.simple[a].push_back({c, std::nullopt});
    }
  } else {
    for (const auto& ma : v.regular) {
      MultiAutomaton lifted = ma;
      lifted.initials.clear();
      for (const auto& i : ma.initials)
        for (ControlId c : by_source[i.control])
          if (!i.locks || *i.locks == origin[c].as.initially_held)
            lifted.initials.push_back({i.state, c, std::nullopt});
      out.regular.push_back(std::move(lifted));
    }
  }
  return out;
}

LocalConfiguration project_config(const ReducedDpn& reduced,
                                  const LocalConfiguration& c) {
  const ReducedControl& o = reduced.origin.at(c.control);
  return {o.source, c.stack, o.as.initially_held};
}

ReducedDpn reduce_ldpn(const LockDpnModel& m, const ReduceOptions& options) {
  const std::size_t n = m.locks().size();
  if (n > kMaxLocks) throw ResourceLimit("too many locks");
  std::optional<LocalConfiguration> query = options.query;
  if (!query) query = m.initial();

  ReducedDpn out;
  out.stats.structure_space = structure_space_size(n);

  std::vector<std::vector<std::uint32_t>> by_control(m.controls().size());
  for (std::uint32_t r = 0; r < m.rules().size(); ++r)
    by_control[m.rules()[r].from].push_back(r);
  const auto fp = lock_footprints(m);

  using Key = std::pair<ControlId, AcquisitionStructure>;
  std::map<Key, ControlId> ids;
  std::vector<ReducedControl> controls;
  const auto intern = [&](ControlId p, const AcquisitionStructure& as) {
    auto [it, inserted] =
        ids.emplace(Key{p, as}, static_cast<ControlId>(controls.size()));
    if (inserted) {
      if (controls.size() >= options.max_controls)
        throw ResourceLimit("reduction exceeded " +
                            std::to_string(options.max_controls) + " controls");
      controls.push_back({p, as});
    }
    return it->second;
  };

  struct PendingRule {
    ControlId from;
    Generated g;
  };
  std::vector<PendingRule> pending;

  if (options.full_materialization) {
    const auto all = enumerate_all(n, options.lock_limit);
    std::vector<AcquisitionStructure> spawnable;
    for (const auto& as : all)
      if (as.initial_releases.empty() && as.initially_held.empty())
        spawnable.push_back(as);
    double estimate = 0;
    for (const auto& r : m.rules())
      estimate += static_cast<double>(all.size()) *
                  (r.spawn ? static_cast<double>(spawnable.size()) : 1.0);
    if (estimate > static_cast<double>(options.max_rules))
      throw ResourceLimit("full materialization would examine " +
                          std::to_string(static_cast<long long>(estimate)) +
                          " rule instances");
    for (ControlId p = 0; p < m.controls().size(); ++p)
      for (const auto& as : all) intern(p, as);

    const auto count = static_cast<std::int64_t>(all.size());
    std::vector<Expansion> per(all.size());
    // Backward generation: each continuation structure yields its
    // predecessors independently.
#pragma omp parallel for schedule(dynamic, 16) if (options.parallel)
    for (std::int64_t k = 0; k < count; ++k) {
      const AcquisitionStructure& after = all[k];
      Expansion& ex = per[k];
      for (std::uint32_t ri = 0; ri < m.rules().size(); ++ri) {
        const Rule& r = m.rules()[ri];
        if (!r.spawn) {
          const auto before = transform(after, r.action);
          if (!before) ++ex.undefined;
          else if (!is_consistent(*before)) ++ex.inconsistent;
          else ex.rules.push_back({ri, after, std::nullopt});
          continue;
        }
        for (const auto& child : spawnable) {
          if (!compatible(after, child)) {
            ++ex.incompatible;
            continue;
          }
          const auto before = transform(merge(after, child), r.action);
          if (!before) ++ex.undefined;
          else if (!is_consistent(*before)) ++ex.inconsistent;
          else ex.rules.push_back({ri, after, child});
        }
      }
    }
    for (std::size_t k = 0; k < per.size(); ++k) {
      out.stats.discarded_undefined += per[k].undefined;
      out.stats.discarded_inconsistent += per[k].inconsistent;
      out.stats.discarded_incompatible += per[k].incompatible;
      for (auto& g : per[k].rules) {
        const Rule& r = m.rules()[g.source_rule];
        AcquisitionStructure before =
            *transform(g.spawned ? merge(g.after, *g.spawned) : g.after, r.action);
        pending.push_back({ids.at({r.from, before}), std::move(g)});
      }
    }
    if (query)
      for (const auto& as : all)
        if (as.initially_held == query->locks)
          out.roots.push_back(ids.at({query->control, as}));
  } else {
    if (!query)
      throw ValidationError("reduction needs an initial configuration");
    std::vector<AcquisitionStructure> root_as;
    if (options.honest_pruning) {
      root_as = honest_roots(fp[query->control], query->locks);
    } else {
      for (const auto& as : enumerate_all(n, options.lock_limit))
        if (as.initially_held == query->locks) root_as.push_back(as);
    }
    for (const auto& as : root_as) out.roots.push_back(intern(query->control, as));

    // Breadth-first by layers; a layer's expansions are independent.
    std::size_t begin = 0;
    while (begin < controls.size()) {
      const std::size_t end = controls.size();
      const auto count = static_cast<std::int64_t>(end - begin);
      std::vector<Expansion> per(end - begin);
#pragma omp parallel for schedule(dynamic, 4) if (options.parallel)
      for (std::int64_t k = 0; k < count; ++k) {
        const ReducedControl& c = controls[begin + k];
        per[k] = expand_control(m, by_control, fp, options.honest_pruning,
                                c.source, c.as);
      }
      for (std::size_t k = 0; k < per.size(); ++k) {
        out.stats.discarded_undefined += per[k].undefined;
        out.stats.discarded_inconsistent += per[k].inconsistent;
        out.stats.discarded_incompatible += per[k].incompatible;
        const auto from = static_cast<ControlId>(begin + k);
        for (auto& g : per[k].rules) {
          const Rule& r = m.rules()[g.source_rule];
          intern(r.to, g.after);
          if (g.spawned) intern(m.dclics()[*r.spawn].control, *g.spawned);
          pending.push_back({from, std::move(g)});
          if (pending.size() > options.max_rules)
            throw ResourceLimit("reduction exceeded " +
                                std::to_string(options.max_rules) + " rules");
        }
      }
      begin = end;
    }
  }

  // Assemble the lock-free model.
  ModelBuilder b;
  for (const auto& a : m.props()) b.add_prop(a);
  for (const auto& d : m.dpds()) b.add_dpds(d.name);
  for (Symbol s = 0; s < m.symbols().size(); ++s)
    for (std::size_t d = 0; d < m.dpds().size(); ++d)
      if (m.in_alphabet(d, s)) b.add_symbol(d, m.symbols()[s]);
  std::map<std::string, std::size_t> taken;
  for (const auto& c : controls) {
    std::string name = m.controls()[c.source] + "#" + hex8(fingerprint(c.as));
    const std::size_t k = taken[name]++;
    if (k > 0) name += "." + std::to_string(k);
    b.add_control(m.dpds_of(c.source), name);
  }
  out.stats.controls_per_dpds.assign(m.dpds().size(), 0);
  out.stats.rules_per_dpds.assign(m.dpds().size(), 0);
  for (const auto& c : controls) ++out.stats.controls_per_dpds[m.dpds_of(c.source)];
  for (const auto& pr : pending) {
    const Rule& r = m.rules()[pr.g.source_rule];
    std::optional<Dclic> spawn;
    if (pr.g.spawned) {
      const Dclic& d = m.dclics()[*r.spawn];
      spawn = Dclic{ids.at({d.control, *pr.g.spawned}), d.stack};
    }
    b.add_rule(pr.from, r.symbol, Action::tau(), ids.at({r.to, pr.g.after}),
               r.push, spawn);
    out.rule_origin.push_back(
        {pr.g.source_rule, controls[pr.from].as, pr.g.after, pr.g.spawned});
    ++out.stats.rules_per_dpds[m.dpds_of(r.from)];
  }
  b.set_valuation(lift_valuation(m, controls));
  out.origin = std::move(controls);
  out.dpn = std::move(b).build();
  out.stats.roots = out.roots.size();
  out.stats.controls = out.origin.size();
  out.stats.rules = out.rule_origin.size();
  return out;
}

std::string reduction_sidecar(const LockDpnModel& source,
                              const ReducedDpn& reduced) {
  nlohmann::json controls = nlohmann::json::object();
  for (ControlId c = 0; c < reduced.origin.size(); ++c) {
    const auto& o = reduced.origin[c];
    controls[reduced.dpn.controls()[c]] = {
        {"control", source.controls()[o.source]},
        {"structure", render(o.as, source.locks())}};
  }
  nlohmann::json roots = nlohmann::json::array();
  for (auto r : reduced.roots) roots.push_back(reduced.dpn.controls()[r]);
  nlohmann::json doc = {{"controls", controls}, {"roots", roots}};
  return doc.dump(2) + "\n";
}

}  // namespace ldpn
