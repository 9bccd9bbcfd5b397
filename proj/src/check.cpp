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

#include "ldpn/check.hpp"

#include <chrono>

#include "ldpn/buchi.hpp"
#include "ldpn/dpn_mc.hpp"
#include "ldpn/error.hpp"
#include "ldpn/graph.hpp"
#include "ldpn/nesting.hpp"

namespace ldpn {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Formulas and automata over the model's props plus one pending prop per
// lock: f /\ G F !pending_l for every l.
std::vector<BuchiAutomaton> automata_for(const LockDpnModel& model,
                                         const std::vector<LtlFormula>& formulas,
                                         bool pending) {
  std::vector<std::string> props = model.props();
  std::vector<LtlFormula> extra;
  if (pending) {
    for (const auto& l : model.locks()) {
      props.push_back(kPendingPropPrefix + l);
      extra.push_back(LtlFormula::always(LtlFormula::eventually(
          LtlFormula::negation(LtlFormula::atom(props.back())))));
    }
  }
  std::vector<BuchiAutomaton> out;
  for (const auto& f : formulas) {
    LtlFormula g = f;
    for (const auto& e : extra) g = LtlFormula::conjunction(g, e);
    out.push_back(build_buchi(g, props));
  }
  return out;
}

struct Engine {
  const LockDpnModel* base = nullptr;
  std::optional<RegularAnnotation> annotation;
  HeadLabeling labels;

  const LockDpnModel& dpn() const { return annotation ? annotation->dpn : *base; }
};

// Lock-free DPN plus labels, annotating regular valuations on the way.
Engine prepare(const LockDpnModel& dpn, const std::vector<Stack>& seeds,
               std::size_t cap) {
  Engine e;
  e.base = &dpn;
  if (dpn.valuation().kind == ValuationKind::kRegular) {
    e.annotation = annotate_regular(dpn, seeds, cap);
    e.labels = e.annotation->labeling();
  } else {
    e.labels = simple_labeling(dpn);
  }
  return e;
}

Stack annotated(const Engine& e, const Stack& s) {
  if (!e.annotation) return s;
  return *e.annotation->annotate(s);
}

}  // namespace

std::vector<std::size_t> vacuous_systems(const LockDpnModel& model,
                                         ControlId control) {
  std::vector<std::vector<std::uint32_t>> succ(model.controls().size());
  for (const auto& r : model.rules()) {
    succ[r.from].push_back(r.to);
    if (r.spawn) succ[r.from].push_back(model.dclics()[*r.spawn].control);
  }
  const auto seen = reachable_from(succ, {control});
  std::vector<bool> used(model.dpds().size(), false);
  for (ControlId c = 0; c < seen.size(); ++c)
    if (seen[c]) used[model.dpds_of(c)] = true;
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < used.size(); ++d)
    if (!used[d]) out.push_back(d);
  return out;
}

CheckReport check_ldpn(const LockDpnModel& model, const CheckRequest& req) {
  if (req.formulas.size() != model.dpds().size())
    throw ValidationError("expected one formula per system, got " +
                          std::to_string(req.formulas.size()) + " for " +
                          std::to_string(model.dpds().size()));
  std::optional<LocalConfiguration> query = req.query;
  if (!query) query = model.initial();
  if (!query) throw ValidationError("no query configuration and no initial one");
  if (query->control >= model.controls().size())
    throw ValidationError("query control out of range");

  CheckReport report;
  report.vacuous = vacuous_systems(model, query->control);
  const auto t0 = std::chrono::steady_clock::now();

  // Nesting pass; source control p becomes control p of the nested model.
  std::optional<NestedModel> nested;
  const LockDpnModel* source = &model;
  if (req.discipline && model.locks().size() > 1) {
    nested = enforce_nesting(model);
    source = &nested->model;
    report.nesting_applied = true;
    report.nesting_controls = nested->model.controls().size();
    report.nesting_dropped_rules = nested->dropped_rules;
  }

  ReduceOptions ro;
  ro.query = query;
  ro.full_materialization = req.full_materialization;
  ro.honest_pruning = req.honest_pruning;
  ro.parallel = req.parallel;
  ro.max_controls = req.max_controls;
  ro.max_rules = req.max_rules;
  const ReducedDpn reduced = reduce_ldpn(*source, ro);
  report.reduction = reduced.stats;
  report.reduce_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const Engine engine = prepare(reduced.dpn, {query->stack}, req.annotation_cap);
  const LockDpnModel& dpn = engine.dpn();
  if (engine.annotation) report.annotated_symbols = dpn.symbols().size();

  const bool pending = req.pending_fairness && !model.locks().empty();
  HeadLabeling labels = engine.labels;
  if (pending) {
    const std::size_t base = model.props().size();
    std::vector<PropSet> extra(reduced.origin.size(), 0);
    for (ControlId c = 0; c < reduced.origin.size(); ++c)
      for (LockId l : reduced.origin[c].as.initial_releases.members())
        extra[c] |= PropSet{1} << (base + l);
    labels = [inner = engine.labels, extra](ControlId c, Symbol s) {
      return inner(c, s) | extra[c];
    };
  }
  const auto automata = automata_for(model, req.formulas, pending);
  const auto products = build_products(dpn, automata, labels);
  for (const auto& b : products) {
    report.product_controls += b.control_count();
    report.product_rules += b.rules.size();
  }
  const DfpResult dfp = compute_dfp(dpn, products, req.parallel);
  report.fixpoint_rounds = dfp.rounds;
  report.dclics = dpn.dclics().size();
  for (std::size_t i = 0; i < dfp.members.size(); ++i)
    if (dfp.members[i]) report.dfp.push_back(render_dclic(dpn, dpn.dclics()[i]));

  const Stack stack = annotated(engine, query->stack);
  const auto& b = products[dpn.dpds_of(query->control)];
  const AcceptingSet acc = accepting_set(b, dfp.members);
  for (ControlId root : reduced.roots) {
    if (acc.accepts(b.entry[root], stack)) {
      report.satisfied = true;
      report.witness_root = dpn.controls()[root];
      break;
    }
  }
  report.check_seconds = seconds_since(t1);
  return report;
}

CheckReport check_ldpn_regular(const LockDpnModel& model,
                               const CheckRequest& request) {
  if (model.valuation().kind != ValuationKind::kRegular)
    throw ValidationError("check_ldpn_regular: valuation is not regular");
  return check_ldpn(model, request);
}

bool check_dpn(const LockDpnModel& model, const std::vector<LtlFormula>& formulas,
               const LocalConfiguration& query, bool parallel) {
  if (!model.lock_free()) throw ValidationError("check_dpn: model uses locks");
  if (formulas.size() != model.dpds().size())
    throw ValidationError("expected one formula per system");
  const Engine engine = prepare(model, {query.stack}, kDefaultAnnotationCap);
  const LockDpnModel& dpn = engine.dpn();
  const auto products =
      build_products(dpn, automata_for(model, formulas, false), engine.labels);
  const DfpResult dfp = compute_dfp(dpn, products, parallel);
  return check_config(products, dpn, dfp.members,
                      {query.control, annotated(engine, query.stack), {}});
}

}  // namespace ldpn
