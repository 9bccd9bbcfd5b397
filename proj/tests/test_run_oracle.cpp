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

#include "catch2/catch_amalgamated.hpp"
#include "json.hpp"
#include "ldpn/acq.hpp"
#include "ldpn/corpus.hpp"
#include "ldpn/error.hpp"
#include "ldpn/oracle.hpp"
#include "ldpn/run_tree.hpp"

using namespace ldpn;
using Json = nlohmann::json;

namespace {

LockDpnModel corpus_model(const std::string& name) {
  return load_model(*corpus_file(name));
}

GlobalRunTree fig1_tree(const char* model, const char* trace) {
  const auto m = corpus_model(model);
  return replay(m, GlobalConfiguration({*m.initial()}),
                parse_trace(*corpus_file(trace)));
}

LockSet locks(const LockDpnModel& m, std::initializer_list<const char*> names) {
  LockSet s;
  for (auto n : names) s = s.with(*m.find_lock(n));
  return s;
}

LockGraph edges(const LockDpnModel& m,
                std::initializer_list<std::pair<const char*, const char*>> es) {
  LockGraph g;
  for (auto [a, b] : es) g = g.with_edge(*m.find_lock(a), *m.find_lock(b));
  return g;
}

// p g -acq(l)-> p' g, plus q d -tau-> q d
LockDpnModel acq_model() {
  return load_model(R"({
    "locks": ["l"], "props": [],
    "pds": [{"name": "P", "controls": ["p", "p2"], "stack": ["g"],
             "rules": [{"from": ["p", "g"], "action": {"acq": "l"}, "to": ["p2", ["g"]]}]},
            {"name": "Q", "controls": ["q"], "stack": ["d"],
             "rules": [{"from": ["q", "d"], "action": "tau", "to": ["q", ["d"]]}]}]
  })");
}

const char* kLoop = R"({
  "props": ["at_p"],
  "pds": [{"name": "P", "controls": ["p"], "stack": ["a"],
           "rules": [{"from": ["p", "a"], "action": "tau", "to": ["p", ["a"]]}]}],
  "valuation": {"type": "simple", "map": {"at_p": [{"control": "p"}]}},
  "initial": {"control": "p", "stack": ["a"]}
})";

std::vector<std::string> locked_corpus() {
  return {"deadlock_pair.ldpn.json", "lock_alternation.ldpn.json",
          "non_nested.ldpn.json",    "fig1.ldpn.json",
          "fig1_prime.ldpn.json",    "server_bounded.ldpn.json",
          "server_mutex.ldpn.json",  "spawn_tree.ldpn.json"};
}

}  // namespace

TEST_CASE("enabled_steps guards", "[oracle]") {
  const auto m = acq_model();
  const ControlId p = *m.find_control("p"), q = *m.find_control("q");
  const Symbol g = *m.find_symbol("g"), d = *m.find_symbol("d");
  const LockSet l = LockSet::single(0);

  CHECK(enabled_steps(GlobalConfiguration(std::vector<LocalConfiguration>{{p, {g}, {}}}), m).size() == 1);
  // l is held by the other instance
  const auto steps = enabled_steps(GlobalConfiguration({{p, {g}, {}}, {q, {d}, l}}), m);
  for (const auto& s : steps) CHECK(m.rules()[s.rule].action.kind == ActionKind::kTau);

  const auto rel = load_model(R"({
    "locks": ["l"],
    "pds": [{"name": "P", "controls": ["p", "p2"], "stack": ["g"],
             "rules": [{"from": ["p", "g"], "action": {"rel": "l"}, "to": ["p2", ["g"]]}]}]
  })");
  CHECK(enabled_steps(GlobalConfiguration(std::vector<LocalConfiguration>{{0, {0}, {}}}), rel).empty());
  CHECK(enabled_steps(GlobalConfiguration(std::vector<LocalConfiguration>{{0, {0}, l}}), rel).size() == 1);
}

TEST_CASE("explore_bounded small cases", "[oracle]") {
  const auto m = load_model(kLoop);
  const GlobalConfiguration start({*m.initial()});
  ExploreOptions o;
  o.depth = 0;
  auto r = explore_bounded(m, start, o);
  REQUIRE(r.configurations.size() == 1);
  CHECK(r.configurations[0] == start);

  o.depth = 3;
  o.keep_all_prefixes = true;
  r = explore_bounded(m, start, o);
  CHECK(r.configurations.size() == 1);
  CHECK(r.trees.size() == 1);
  CHECK(r.trees[0].trace().size() == 3);
}

TEST_CASE("explore_bounded finds the AB/BA deadlock", "[oracle]") {
  const auto m = corpus_model("deadlock_pair.ldpn.json");
  const ControlId a1 = *m.find_control("a1"), b0 = *m.find_control("b0");
  const GlobalConfiguration start(
      {{a1, {*m.find_symbol("x")}, {}}, {b0, {*m.find_symbol("y")}, {}}});
  ExploreOptions o;
  o.depth = 4;
  const auto r = explore_bounded(m, start, o);
  const LockSet l1 = locks(m, {"l1"}), l2 = locks(m, {"l2"});
  bool stuck = false;
  for (const auto& g : r.configurations) {
    bool a_holds = false, b_holds = false;
    for (const auto& e : g.elements()) {
      if (e.control == *m.find_control("a2") && e.locks == l1) a_holds = true;
      if (e.control == *m.find_control("b1") && e.locks == l2) b_holds = true;
    }
    if (a_holds && b_holds) {
      CHECK(enabled_steps(g, m).empty());
      stuck = true;
    }
  }
  CHECK(stuck);
}

TEST_CASE("fig1 trees: nesting", "[oracle][fig1]") {
  const auto fig1 = corpus_model("fig1.ldpn.json");
  const auto prime = corpus_model("fig1_prime.ldpn.json");
  CHECK(check_nested(fig1_tree("fig1.ldpn.json", "fig1_T.trace"), fig1));
  CHECK_FALSE(check_nested(fig1_tree("fig1_prime.ldpn.json", "fig1_prime_T.trace"), prime));
}

TEST_CASE("fig1 tree: acquisition structures", "[oracle][fig1]") {
  const auto m = corpus_model("fig1.ldpn.json");
  const auto t = fig1_tree("fig1.ldpn.json", "fig1_T.trace");

  const auto whole = acq_structure_of_tree(t, m, LockSet());
  CHECK(whole.initial_releases.empty());
  CHECK(whole.release_graph.empty());
  CHECK(whole.usages == locks(m, {"l2", "l3"}));
  CHECK(whole.acquisition_graph == edges(m, {{"l1", "l2"}, {"l1", "l3"}}));
  CHECK(whole.final_acquisitions == locks(m, {"l1"}));
  CHECK(whole.initially_held.empty());

  const ControlId n6 = *m.find_control("n6");
  std::optional<std::uint32_t> node;
  for (std::uint32_t i = 0; i < t.nodes().size() && !node; ++i)
    if (t.nodes()[i].config.control == n6) node = i;
  REQUIRE(node);
  CHECK(t.nodes()[*node].config.locks == locks(m, {"l1", "l2"}));
  const auto sub = acq_structure_of_tree(t, m, *node, locks(m, {"l1", "l2"}));
  CHECK(sub.initial_releases == locks(m, {"l2"}));
  CHECK(sub.release_graph == edges(m, {{"l3", "l2"}}));
  CHECK(sub.usages == locks(m, {"l2", "l3"}));
  CHECK(sub.acquisition_graph.empty());
  CHECK(sub.final_acquisitions.empty());
  CHECK(sub.initially_held == locks(m, {"l1", "l2"}));
}

TEST_CASE("root-only tree has the empty structure", "[oracle]") {
  const auto m = corpus_model("fig1.ldpn.json");
  const GlobalRunTree t(GlobalConfiguration({*m.initial()}));
  CHECK(acq_structure_of_tree(t, m, LockSet()) == AcquisitionStructure{});
  CHECK(check_nested(t, m));
}

TEST_CASE("lock-free trees are nested", "[oracle]") {
  const auto m = corpus_model("recursion.ldpn.json");
  ExploreOptions o;
  o.depth = 5;
  o.keep_all_prefixes = true;
  for (const auto& t : explore_bounded(m, GlobalConfiguration({*m.initial()}), o).trees)
    CHECK(check_nested(t, m));
}

TEST_CASE("parse_trace", "[oracle]") {
  const auto s = parse_trace("# header\n0:1 2:3\n4:0\n");
  REQUIRE(s.size() == 3);
  CHECK(s[1].leaf == 2);
  CHECK(s[1].rule == 3);
  CHECK(s[2].step == 2);
  CHECK_THROWS_AS(parse_trace("0-1"), ParseError);
  const auto m = corpus_model("fig1.ldpn.json");
  CHECK_THROWS_AS(replay(m, GlobalConfiguration({*m.initial()}), parse_trace("0:5")),
                  ValidationError);
}

TEST_CASE("explored trees replay, keep lock ownership and nest consistently",
          "[oracle][corpus]") {
  for (const auto& name : locked_corpus()) {
    INFO(name);
    const auto m = corpus_model(name);
    const GlobalConfiguration start({*m.initial()});
    for (bool all : {false, true}) {
      ExploreOptions o;
      o.depth = all ? 5 : 8;
      o.keep_all_prefixes = all;
      const auto r = explore_bounded(m, start, o);
      for (const auto& t : r.trees) {
        CHECK(replay(m, start, t.trace()) == t);
        // every prefix is a valid global configuration
        std::vector<SchedulerStep> prefix;
        for (const auto& s : t.trace()) {
          prefix.push_back(s);
          CHECK_NOTHROW(replay(m, start, prefix).configuration());
        }
        if (!check_nested(t, m)) continue;
        for (std::uint32_t n = 0; n < t.nodes().size(); ++n)
          CHECK(is_consistent(
              acq_structure_of_tree(t, m, n, t.nodes()[n].config.locks)));
      }
    }
  }
}

TEST_CASE("explicit oracle small cases", "[oracle]") {
  const auto m = load_model(kLoop);
  const GlobalConfiguration start({*m.initial()});
  CHECK(explicit_buchi_oracle(m, {parse_ltl("G at_p")}, start).satisfied);
  CHECK_FALSE(explicit_buchi_oracle(m, {parse_ltl("F !at_p")}, start).satisfied);

  const auto alt = corpus_model("lock_alternation.ldpn.json");
  const auto f = parse_formulas(alt, *corpus_file("lock_alternation.ltl"));
  const auto r = explicit_buchi_oracle(alt, f, GlobalConfiguration({*alt.initial()}));
  CHECK(r.satisfied);
  CHECK(r.states <= 30);
}

TEST_CASE("explicit oracle refuses unbounded instances", "[oracle]") {
  const auto m = corpus_model("server.ldpn.json");
  const auto f = parse_formulas(m, *corpus_file("server_starvation.ltl"));
  CHECK_THROWS_AS(explicit_buchi_oracle(m, f, GlobalConfiguration({*m.initial()})),
                  ResourceLimit);
}

TEST_CASE("explicit oracle is stable under larger bounds", "[oracle][corpus]") {
  const std::vector<std::pair<const char*, const char*>> cases = {
      {"deadlock_pair.ldpn.json", "deadlock_pair.ltl"},
      {"lock_alternation.ldpn.json", "lock_alternation.ltl"},
      {"non_nested.ldpn.json", "non_nested.ltl"},
      {"server_bounded.ldpn.json", "server_bounded.ltl"},
      {"server_bounded.ldpn.json", "server_bounded_live.ltl"},
      {"recursion.ldpn.json", "recursion.ltl"}};
  for (auto [model, ltl] : cases) {
    INFO(model << " " << ltl);
    const auto m = corpus_model(model);
    const auto f = parse_formulas(m, *corpus_file(ltl));
    const GlobalConfiguration start({*m.initial()});
    OracleOptions small;
    const auto a = explicit_buchi_oracle(m, f, start, small);
    OracleOptions large;
    large.stack_bound = small.stack_bound + 4;
    large.instance_bound = small.instance_bound + 2;
    const auto b = explicit_buchi_oracle(m, f, start, large);
    CHECK(a.satisfied == b.satisfied);
    CHECK(a.states == b.states);
  }
}
