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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldpn/buchi.hpp"
#include "ldpn/check.hpp"
#include "ldpn/corpus.hpp"
#include "ldpn/dot.hpp"
#include "ldpn/dpn_mc.hpp"
#include "ldpn/error.hpp"
#include "ldpn/nesting.hpp"
#include "ldpn/oracle.hpp"
#include "ldpn/reduce.hpp"
#include "ldpn/run_tree.hpp"

namespace ldpn {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kCorpusPrefix = "corpus:";

// Files named "corpus:<name>" come from the bundled examples.
std::string read_input(const std::string& path) {
  if (path.rfind(kCorpusPrefix, 0) == 0) {
    const auto text = corpus_file(path.substr(kCorpusPrefix.size()));
    if (!text) throw ValidationError("no bundled file '" + path + "'");
    return std::string(*text);
  }
  return read_text_file(path);
}

void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

LockSet locks_named(const LockDpnModel& m, const std::string& text) {
  LockSet s;
  for (const auto& name : split_names(text)) {
    const auto l = m.find_lock(name);
    if (!l) throw ValidationError("unknown lock '" + name + "'");
    s = s.with(*l);
  }
  return s;
}

Json names(const LockDpnModel& m, const std::vector<std::size_t>& systems) {
  Json out = Json::array();
  for (auto d : systems) out.push_back(m.dpds()[d].name);
  return out;
}

Json report_json(const LockDpnModel& m, const CheckReport& r, bool timings) {
  Json j;
  j["verdict"] = r.satisfied ? "SAT" : "UNSAT";
  j["reading"] =
      "SAT: some global run from the query satisfies every system's formula "
      "on each of its local runs";
  j["witness_root"] = r.witness_root ? Json(*r.witness_root) : Json(nullptr);
  j["vacuous"] = names(m, r.vacuous);
  j["nesting"] = {{"applied", r.nesting_applied},
                  {"controls", r.nesting_controls},
                  {"dropped_rules", r.nesting_dropped_rules}};
  const auto& s = r.reduction;
  j["reduction"] = {{"structure_space", s.structure_space},
                    {"roots", s.roots},
                    {"controls", s.controls},
                    {"rules", s.rules},
                    {"discarded_undefined", s.discarded_undefined},
                    {"discarded_inconsistent", s.discarded_inconsistent},
                    {"discarded_incompatible", s.discarded_incompatible},
                    {"controls_per_system", s.controls_per_dpds},
                    {"rules_per_system", s.rules_per_dpds}};
  j["annotated_symbols"] = r.annotated_symbols;
  j["product"] = {{"controls", r.product_controls}, {"rules", r.product_rules}};
  j["dclics"] = r.dclics;
  j["dfp"] = r.dfp;
  j["fixpoint_rounds"] = r.fixpoint_rounds;
  if (timings)
    j["timings"] = {{"reduce_seconds", r.reduce_seconds},
                    {"check_seconds", r.check_seconds}};
  return j;
}

std::string report_text(const LockDpnModel& m, const CheckReport& r,
                        bool timings) {
  std::ostringstream o;
  o << (r.satisfied ? "SAT" : "UNSAT") << "\n";
  o << (r.satisfied ? "  a global run satisfying every formula exists"
                    : "  no global run satisfies every formula")
    << "\n";
  if (r.witness_root) o << "  witness root: " << *r.witness_root << "\n";
  for (auto d : r.vacuous)
    o << "  vacuous: " << m.dpds()[d].name << " is never instantiated\n";
  if (r.nesting_applied)
    o << "  nesting: " << r.nesting_controls << " controls, "
      << r.nesting_dropped_rules << " rule instances dropped\n";
  const auto& s = r.reduction;
  o << "  |AS| = " << s.structure_space << ", roots " << s.roots
    << ", reduced controls " << s.controls << ", reduced rules " << s.rules
    << "\n";
  o << "  discarded: " << s.discarded_undefined << " undefined, "
    << s.discarded_inconsistent << " inconsistent, " << s.discarded_incompatible
    << " incompatible\n";
  if (r.annotated_symbols) o << "  annotated symbols: " << r.annotated_symbols << "\n";
  o << "  product: " << r.product_controls << " controls, " << r.product_rules
    << " rules\n";
  o << "  D_fp: " << r.dfp.size() << " of " << r.dclics << " DCLICs after "
    << r.fixpoint_rounds << " rounds\n";
  if (timings)
    o << "  time: reduce " << r.reduce_seconds << " s, check " << r.check_seconds
      << " s\n";
  return o.str();
}

struct Common {
  std::string model;
  std::string formulas;
  std::string output;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Single-indexed LTL model checking for pushdown networks with locks"};
  app.name("ldpn");
  app.require_subcommand(1);

  Common c;

  auto* validate = app.add_subcommand("validate", "Load and check a model");
  validate->add_option("model", c.model, "Model file")->required();
  validate->add_option("--formulas", c.formulas, "Formula file to check as well");

  bool full = false, no_honest = false, serial = false;
  std::string sidecar, initial_locks;
  auto* reduce = app.add_subcommand("reduce", "Emit the lock-free reduced model");
  reduce->add_option("model", c.model, "Model file")->required();
  reduce->add_option("-o,--output", c.output, "Output path (default stdout)");
  reduce->add_option("--sidecar", sidecar, "Write the control table here");
  reduce->add_option("--initial-locks", initial_locks, "Comma-separated L0");
  reduce->add_flag("--full-materialization", full, "Build every control P x AS");
  reduce->add_flag("--no-honest", no_honest, "Keep dishonest annotations");
  reduce->add_flag("--serial", serial, "Single-threaded construction");

  bool json = false, timings = false, fail_on_unsat = false, no_discipline = false,
       no_fairness = false;
  std::size_t annotation_cap = kDefaultAnnotationCap, max_controls = 500000;
  auto* check = app.add_subcommand("check", "Decide the formulas on the model");
  check->add_option("model", c.model, "Model file")->required();
  check->add_option("--formulas", c.formulas, "Formula file")->required();
  check->add_option("--initial-locks", initial_locks, "Comma-separated L0");
  check->add_flag("--json", json, "Structured report");
  check->add_flag("--timings", timings, "Include timings");
  check->add_flag("--fail-on-unsat", fail_on_unsat, "Exit 1 on UNSAT");
  check->add_flag("--no-discipline", no_discipline,
                  "Do not restrict runs to nested lock usage");
  check->add_flag("--no-fairness", no_fairness,
                  "Drop the pending-release fairness conjunct");
  check->add_flag("--full-materialization", full, "Build every control P x AS");
  check->add_flag("--no-honest", no_honest, "Keep dishonest annotations");
  check->add_flag("--serial", serial, "Single-threaded kernels");
  check->add_option("--annotation-cap", annotation_cap, "Cap on annotated symbols");
  check->add_option("--max-controls", max_controls, "Cap on reduced controls");

  std::size_t depth = 6;
  OracleOptions oo;
  auto* oracle = app.add_subcommand("oracle", "Bounded explicit exploration");
  oracle->add_option("model", c.model, "Model file")->required();
  oracle->add_option("--formulas", c.formulas, "Also decide these formulas");
  oracle->add_option("--depth", depth, "Exploration depth");
  oracle->add_option("--stack-bound", oo.stack_bound, "Stack height bound");
  oracle->add_option("--instance-bound", oo.instance_bound, "Instance bound");
  oracle->add_option("--max-states", oo.max_states, "State cap");
  oracle->add_flag("--json", json, "Structured report");

  std::string kind, formula, system, trace;
  auto* dot = app.add_subcommand("export-dot", "Graphviz output");
  dot->add_option("kind", kind, "ba | ma | model | reduced | tree")
      ->required()
      ->check(CLI::IsMember({"ba", "ma", "model", "reduced", "tree"}));
  dot->add_option("model", c.model, "Model file");
  dot->add_option("--formula", formula, "LTL formula (ba)");
  dot->add_option("--formulas", c.formulas, "Formula file (ma)");
  dot->add_option("--system", system, "System name (ma)");
  dot->add_option("--trace", trace, "Scheduler trace file (tree)");
  dot->add_option("-o,--output", c.output, "Output path (default stdout)");

  bool list = false;
  std::string dump, dump_dir;
  auto* examples = app.add_subcommand("examples", "Bundled corpus");
  examples->add_flag("--list", list, "List bundled files");
  examples->add_option("--dump", dump, "Print one bundled file");
  examples->add_option("--dump-all", dump_dir, "Write every bundled file here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*examples) {
      if (list) {
        for (const auto& f : corpus_files()) out << f.name << "\n";
      } else if (!dump.empty()) {
        const auto text = corpus_file(dump);
        if (!text) throw ValidationError("no bundled file '" + dump + "'");
        out << *text;
      } else if (!dump_dir.empty()) {
        for (const auto& f : corpus_files())
          write_output(dump_dir + "/" + std::string(f.name), std::string(f.text), out);
      } else {
        err << "examples: give --list, --dump or --dump-all\n";
        return 2;
      }
      return 0;
    }

    if (*dot && kind == "ba") {
      if (formula.empty()) throw ValidationError("export-dot ba needs --formula");
      write_output(c.output, buchi_to_dot(build_buchi(parse_ltl(formula))), out);
      return 0;
    }

    if (c.model.empty()) throw ValidationError("missing model file");
    const LockDpnModel model = load_model(read_input(c.model));
    std::vector<LtlFormula> formulas;
    if (!c.formulas.empty()) formulas = parse_formulas(model, read_input(c.formulas));

    if (*validate) {
      out << "ok: " << model.dpds().size() << " systems, "
          << model.controls().size() << " controls, " << model.rules().size()
          << " rules, " << model.locks().size() << " locks, "
          << model.dclics().size() << " DCLICs";
      if (!formulas.empty()) out << ", " << formulas.size() << " formulas";
      out << "\n";
      return 0;
    }

    std::optional<LocalConfiguration> query = model.initial();
    if (!initial_locks.empty()) {
      if (!query) throw ValidationError("model has no initial configuration");
      query->locks = locks_named(model, initial_locks);
    }

    if (*reduce) {
      ReduceOptions ro;
      ro.query = query;
      ro.full_materialization = full;
      ro.honest_pruning = !no_honest;
      ro.parallel = !serial;
      const ReducedDpn reduced = reduce_ldpn(model, ro);
      write_output(c.output, save_model(reduced.dpn), out);
      if (!sidecar.empty())
        write_output(sidecar, reduction_sidecar(model, reduced), out);
      return 0;
    }

    if (*check) {
      CheckRequest req;
      req.formulas = formulas;
      req.query = query;
      req.discipline = !no_discipline;
      req.pending_fairness = !no_fairness;
      req.parallel = !serial;
      req.full_materialization = full;
      req.honest_pruning = !no_honest;
      req.annotation_cap = annotation_cap;
      req.max_controls = max_controls;
      const CheckReport report = check_ldpn(model, req);
      if (json) out << report_json(model, report, timings).dump(2) << "\n";
      else out << report_text(model, report, timings);
      return (!report.satisfied && fail_on_unsat) ? 1 : 0;
    }

    if (*oracle) {
      if (!query) throw ValidationError("model has no initial configuration");
      const GlobalConfiguration start({*query});
      ExploreOptions eo;
      eo.depth = depth;
      const ExploreResult dedupe = explore_bounded(model, start, eo);
      std::size_t nested = 0, prefixes = 0;
      eo.keep_all_prefixes = true;
      const ExploreResult all = explore_bounded(model, start, eo);
      for (const auto& t : all.trees) {
        ++prefixes;
        if (check_nested(t, model)) ++nested;
      }
      std::optional<OracleResult> verdict;
      if (!formulas.empty())
        verdict = explicit_buchi_oracle(model, formulas, start, oo);
      if (json) {
        Json j;
        j["depth"] = depth;
        j["configurations"] = dedupe.configurations.size();
        j["prefixes"] = prefixes;
        j["nested_prefixes"] = nested;
        if (verdict) {
          j["verdict"] = verdict->satisfied ? "SAT" : "UNSAT";
          j["states"] = verdict->states;
          j["edges"] = verdict->edges;
          j["vacuous"] = names(model, verdict->vacuous);
        }
        out << j.dump(2) << "\n";
      } else {
        out << "configurations within depth " << depth << ": "
            << dedupe.configurations.size() << "\n";
        out << "nested discipline: " << nested << " of " << prefixes
            << " maximal prefixes use locks in a nested style\n";
        if (verdict)
          out << (verdict->satisfied ? "SAT" : "UNSAT") << " (" << verdict->states
              << " states, " << verdict->edges << " edges)\n";
      }
      return 0;
    }

    if (*dot) {
      std::string text;
      if (kind == "model") {
        text = model_to_dot(model);
      } else if (kind == "reduced") {
        ReduceOptions ro;
        ro.query = query;
        text = reduced_to_dot(reduce_ldpn(model, ro));
      } else if (kind == "tree") {
        if (!query) throw ValidationError("model has no initial configuration");
        if (trace.empty()) throw ValidationError("export-dot tree needs --trace");
        const auto tree =
            replay(model, GlobalConfiguration({*query}), parse_trace(read_input(trace)));
        text = run_tree_to_dot(tree, model);
      } else {  // ma
        if (formulas.empty()) throw ValidationError("export-dot ma needs --formulas");
        if (!model.lock_free())
          throw ValidationError("export-dot ma needs a lock-free model; reduce it first");
        const auto d = model.find_dpds(system.empty() ? model.dpds()[0].name : system);
        if (!d) throw ValidationError("unknown system '" + system + "'");
        std::vector<BuchiAutomaton> automata;
        for (const auto& f : formulas) automata.push_back(build_buchi(f, model.props()));
        const auto products = build_products(model, automata, simple_labeling(model));
        text = ma_to_dot(build_result_ma(model, products[*d]), model);
      }
      write_output(c.output, text, out);
      return 0;
    }
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ldpn
