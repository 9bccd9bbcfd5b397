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

#include <random>
#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "json.hpp"
#include "ldpn/corpus.hpp"
#include "ldpn/error.hpp"
#include "ldpn/model.hpp"
#include "support/oracles.hpp"

using namespace ldpn;
using Json = nlohmann::json;

namespace {

const char* kMinimal = R"({
  "locks": [], "props": ["at_p"],
  "pds": [{"name": "P", "controls": ["p"], "stack": ["a"],
           "rules": [{"from": ["p", "a"], "action": "tau", "to": ["p", ["a"]]}]}],
  "valuation": {"type": "simple", "map": {"at_p": [{"control": "p"}]}},
  "initial": {"control": "p", "stack": ["a"]}
})";

std::vector<std::string> corpus_models() {
  std::vector<std::string> out;
  for (const auto& f : corpus_files())
    if (f.name.ends_with(".ldpn.json")) out.emplace_back(f.name);
  return out;
}

LockDpnModel corpus_model(const std::string& name) {
  return load_model(*corpus_file(name));
}

}  // namespace

TEST_CASE("load_model minimal document", "[model]") {
  const auto m = load_model(kMinimal);
  CHECK(m.dpds().size() == 1);
  CHECK(m.dclics().empty());
  CHECK(m.rules().size() == 1);
  CHECK(m.lock_free());
  REQUIRE(m.initial());
  CHECK(valuation_holds(m, "at_p", *m.initial()));
}

TEST_CASE("load_model server corpus", "[model]") {
  const auto m = corpus_model("server.ldpn.json");
  REQUIRE(m.dpds().size() == 2);
  CHECK(m.dpds()[0].name == "Main");
  CHECK(m.dpds()[1].name == "Worker");
  CHECK(m.locks().size() == 1);
  CHECK(m.props() == std::vector<std::string>{"ap1", "ap2", "ap3"});
  // Main creates one kind of worker
  REQUIRE(m.dclics().size() == 1);
  CHECK(m.dpds_of(m.dclics()[0].control) == 1);
}

TEST_CASE("load_model rejects shared controls", "[model]") {
  auto doc = Json::parse(kMinimal);
  doc["pds"].push_back({{"name", "Q"}, {"controls", {"p"}}, {"stack", {"b"}},
                        {"rules", Json::array()}});
  try {
    load_model(doc.dump());
    FAIL("accepted overlapping control sets");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("controls not disjoint") != std::string::npos);
  }
}

TEST_CASE("load_model reports bad references", "[model]") {
  auto doc = Json::parse(kMinimal);
  doc["pds"][0]["rules"][0]["to"] = {"q", {"a"}};
  CHECK_THROWS_WITH(load_model(doc.dump()), Catch::Matchers::ContainsSubstring("unknown control 'q'"));
  doc = Json::parse(kMinimal);
  doc["pds"][0]["rules"][0]["action"] = {{"acq", "l"}};
  CHECK_THROWS_WITH(load_model(doc.dump()), Catch::Matchers::ContainsSubstring("undeclared lock 'l'"));
  doc = Json::parse(kMinimal);
  doc["pds"][0]["rules"][0]["from"] = {"p", "z"};
  CHECK_THROWS_AS(load_model(doc.dump()), ValidationError);
  CHECK_THROWS_AS(load_model("{ not json"), ParseError);
}

TEST_CASE("every bundled model validates", "[model][corpus]") {
  for (const auto& name : corpus_models()) {
    INFO(name);
    CHECK_NOTHROW(corpus_model(name));
  }
}

TEST_CASE("removing a required key gives a pointed message", "[model][corpus]") {
  for (const auto& name : corpus_models()) {
    const auto doc = Json::parse(*corpus_file(name));
    std::vector<std::pair<Json::json_pointer, std::string>> keys = {
        {Json::json_pointer("/pds"), "pds"}};
    for (const char* k : {"name", "controls", "stack", "rules"})
      keys.push_back({Json::json_pointer("/pds/0/" + std::string(k)), k});
    if (!doc["pds"][0]["rules"].empty())
      for (const char* k : {"from", "action", "to"})
        keys.push_back({Json::json_pointer("/pds/0/rules/0/" + std::string(k)), k});
    if (doc["valuation"]["map"].is_object())
      keys.push_back({Json::json_pointer("/valuation/type"), "type"});
    for (const auto& [ptr, key] : keys) {
      INFO(name << " without " << ptr.to_string());
      Json broken = doc;
      broken[ptr.parent_pointer()].erase(ptr.back());
      CHECK_THROWS_WITH(load_model(broken.dump()),
                        Catch::Matchers::ContainsSubstring("missing key '" + key + "'"));
    }
    Json wrong = doc;
    wrong["pds"][0]["controls"] = 7;
    CHECK_THROWS_WITH(load_model(wrong.dump()),
                      Catch::Matchers::ContainsSubstring("pds[0].controls"));
  }
}

TEST_CASE("save_model round-trips", "[model][corpus]") {
  for (const auto& name : corpus_models()) {
    INFO(name);
    const auto m = corpus_model(name);
    const std::string once = save_model(m);
    const auto m2 = load_model(once);
    CHECK(save_model(m2) == once);
    CHECK(m2.controls() == m.controls());
    CHECK(m2.symbols() == m.symbols());
    CHECK(m2.dclics() == m.dclics());
    CHECK(m2.rules().size() == m.rules().size());
    CHECK(m2.initial() == m.initial());
  }
}

TEST_CASE("dclics_of is the set of spawn targets", "[model][corpus]") {
  CHECK(dclics_of(load_model(kMinimal)).empty());
  auto doc = Json::parse(kMinimal);
  doc["pds"].push_back({{"name", "Q"}, {"controls", {"q"}}, {"stack", {"b"}},
                        {"rules", Json::array()}});
  auto& rules = doc["pds"][0]["rules"];
  rules.push_back({{"from", {"p", "a"}}, {"action", "tau"}, {"to", {"p", Json::array()}},
                   {"spawn", {"q", {"b"}}}});
  rules.push_back({{"from", {"p", "a"}}, {"action", "tau"}, {"to", {"p", {"a", "a"}}},
                   {"spawn", {"q", {"b"}}}});
  const auto m = load_model(doc.dump());
  CHECK(dclics_of(m).size() == 1);
  CHECK(m.rules()[1].spawn == m.rules()[2].spawn);

  // independent scan of the documents
  for (const auto& name : corpus_models()) {
    INFO(name);
    const auto j = Json::parse(*corpus_file(name));
    std::set<std::string> targets;
    for (const auto& p : j["pds"])
      for (const auto& r : p["rules"])
        if (r.contains("spawn") && !r["spawn"].is_null()) {
          std::string s = r["spawn"][0].get<std::string>() + "[";
          for (const auto& x : r["spawn"][1]) s += x.get<std::string>() + " ";
          targets.insert(s);
        }
    const auto model = corpus_model(name);
    std::set<std::string> got;
    for (const auto& d : dclics_of(model)) {
      std::string s = model.controls()[d.control] + "[";
      for (Symbol x : d.stack) s += model.symbols()[x] + " ";
      got.insert(s);
    }
    CHECK(got == targets);
    CHECK(dclics_of(model) == model.dclics());
  }
}

TEST_CASE("ma_accepts basics", "[model]") {
  MultiAutomaton none;
  none.state_names = {"q"};
  none.accepting = {false};
  none.initials = {{0, 0, LockSet()}};
  none.transitions = {{0, 0, 0, 0}};
  CHECK(ma_accepts(none, 0, LockSet(), {0}).empty());

  MultiAutomaton one;
  one.state_names = {"p", "acc"};
  one.accepting = {false, true};
  one.initials = {{0, 0, LockSet()}};
  one.transitions = {{0, 0, 0, 1}};
  CHECK(ma_accepts(one, 0, LockSet(), {0}) == std::vector<DclicSet>{0});
  CHECK(ma_accepts(one, 0, LockSet::single(0), {0}).empty());

  MultiAutomaton two = one;
  two.state_names.push_back("mid");
  two.accepting.push_back(false);
  two.transitions = {{0, 0, 1, 2}, {2, 1, 0, 1}, {0, 0, 0, 2}};
  CHECK(ma_accepts(two, 0, LockSet(), {0, 1}) == std::vector<DclicSet>{0, 1});
  CHECK(testing::brute_force_ma_accepts(two, 0, LockSet(), {0, 1}) ==
        std::vector<DclicSet>{0, 1});
}

TEST_CASE("ma_accepts composes annotations like explicit paths", "[model][random]") {
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    MultiAutomaton a;
    const std::uint32_t n = 1 + rng() % 4;
    for (std::uint32_t q = 0; q < n; ++q) {
      a.state_names.push_back("q" + std::to_string(q));
      a.accepting.push_back(rng() % 3 == 0);
    }
    a.initials = {{0, 0, LockSet()}, {rng() % n, 1, std::nullopt}};
    const std::uint32_t t = rng() % 9;
    for (std::uint32_t k = 0; k < t; ++k)
      a.transitions.push_back({static_cast<std::uint32_t>(rng() % n),
                               static_cast<Symbol>(rng() % 2), rng() % 4,
                               static_cast<std::uint32_t>(rng() % n)});
    for (int w = 0; w < 5; ++w) {
      Stack s(rng() % 4);
      for (auto& x : s) x = rng() % 2;
      const ControlId c = rng() % 2;
      CHECK(ma_accepts(a, c, LockSet(), s) ==
            testing::brute_force_ma_accepts(a, c, LockSet(), s));
    }
  }
}

TEST_CASE("valuation_holds simple and regular", "[model]") {
  auto doc = Json::parse(kMinimal);
  doc["locks"] = {"l"};
  doc["props"] = {"ap1"};
  doc["valuation"] = {{"type", "simple"},
                      {"map", {{"ap1", {{{"control", "p"}, {"locks", {"l"}}}}}}}};
  const auto m = load_model(doc.dump());
  CHECK(valuation_holds(m, "ap1", {0, {0}, LockSet::single(0)}));
  CHECK_FALSE(valuation_holds(m, "ap1", {0, {0}, LockSet()}));
  CHECK_THROWS_AS(valuation_holds(m, "nope", {0, {0}, LockSet()}), ValidationError);

  // stacks whose bottom symbol is `main`
  auto reg = Json::parse(kMinimal);
  reg["pds"][0]["stack"] = {"a", "main"};
  reg["props"] = {"bottom_main"};
  reg["valuation"] = {
      {"type", "regular"},
      {"map",
       {{"bottom_main",
         {{"states", {"s", "t"}},
          {"initials", {{{"state", "s"}, {"control", "p"}, {"locks", Json::array()}}}},
          {"accepting", {"t"}},
          {"transitions", {{"s", "a", "s"}, {"s", "main", "s"}, {"s", "main", "t"}}}}}}}};
  const auto r = load_model(reg.dump());
  const Symbol a = *r.find_symbol("a"), mn = *r.find_symbol("main");
  CHECK(valuation_holds(r, "bottom_main", {0, {a, mn}, LockSet()}));
  CHECK_FALSE(valuation_holds(r, "bottom_main", {0, {a}, LockSet()}));
  CHECK_FALSE(valuation_holds(r, "bottom_main", {0, {mn, a}, LockSet()}));
  const auto& ma = r.valuation().regular[0];
  for (const Stack& s : {Stack{a, mn}, Stack{a}, Stack{mn, a}, Stack{mn}}) {
    const auto d = testing::brute_force_ma_accepts(ma, 0, LockSet(), s);
    CHECK(valuation_holds(r, "bottom_main", {0, s, LockSet()}) ==
          (std::find(d.begin(), d.end(), DclicSet{0}) != d.end()));
  }
}

TEST_CASE("global configurations keep one owner per lock", "[model]") {
  CHECK_THROWS_AS(GlobalConfiguration({{0, {}, LockSet::single(0)},
                                       {1, {}, LockSet::single(0)}}),
                  ValidationError);
  const GlobalConfiguration g({{0, {}, LockSet::single(0)}, {1, {}, LockSet::single(1)}});
  CHECK(g.hold() == LockSet(3));
  CHECK(g.free(3) == LockSet(4));
  CHECK(GlobalConfiguration({{1, {}, {}}, {0, {}, {}}}) ==
        GlobalConfiguration({{0, {}, {}}, {1, {}, {}}}));
}

TEST_CASE("formula files", "[model]") {
  const auto m = corpus_model("server.ldpn.json");
  const auto f = parse_formulas(m, "# comment\nWorker: F ap1 & G !ap2\n\nMain: true\n");
  REQUIRE(f.size() == 2);
  CHECK(f[0] == LtlFormula::truth());
  CHECK_THROWS_AS(parse_formulas(m, "Main: true\n"), ValidationError);
  CHECK_THROWS_AS(parse_formulas(m, "Main: true\nWorker: F nope\n"), ValidationError);
  CHECK_THROWS_AS(parse_formulas(m, "Main: true\nWorker: F (\n"), ParseError);
  CHECK_THROWS_AS(parse_formulas(m, "Main: true\nMain: true\nWorker: true\n"),
                  ValidationError);
}
