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

#include <algorithm>
#include <random>
#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "ldpn/acq.hpp"
#include "ldpn/error.hpp"
#include "ldpn/reduce.hpp"
#include "support/oracles.hpp"

using namespace ldpn;
using ldpn::testing::brute_force_structures;
using ldpn::testing::literal_rule1;
using ldpn::testing::literal_rule2;

namespace {

constexpr LockId l1 = 0, l2 = 1, l3 = 2;

LockSet S(std::initializer_list<LockId> ls) {
  LockSet s;
  for (auto l : ls) s = s.with(l);
  return s;
}

LockGraph E(std::initializer_list<std::pair<LockId, LockId>> es) {
  LockGraph g;
  for (auto [a, b] : es) g = g.with_edge(a, b);
  return g;
}

bool acyclic_union(LockGraph a, LockGraph b) { return (a | b).acyclic(); }

// The six conditions as listed.
bool literal_compatible(const AcquisitionStructure& a, const AcquisitionStructure& b) {
  const LockSet h1 = a.initially_held - a.initial_releases;
  const LockSet h2 = b.initially_held - b.initial_releases;
  return (a.initially_held & b.initially_held).empty() &&
         ((a.final_acquisitions | h1) & (b.final_acquisitions | h2)).empty() &&
         acyclic_union(a.release_graph, b.release_graph) &&
         acyclic_union(a.acquisition_graph, b.acquisition_graph) &&
         ((a.final_acquisitions | a.usages) & h2).empty() &&
         ((b.final_acquisitions | b.usages) & h1).empty();
}

std::optional<AcquisitionStructure> transform(const AcquisitionStructure& m,
                                              const Action& a) {
  if (a.kind == ActionKind::kTau) return m;
  if (a.kind == ActionKind::kRelease) return rel_update(m, a.lock);
  return acq_update(m, a.lock);
}

std::vector<Action> actions(std::size_t n) {
  std::vector<Action> out{Action::tau()};
  for (LockId l = 0; l < n; ++l) {
    out.push_back(Action::acquire(l));
    out.push_back(Action::release(l));
  }
  return out;
}

const std::vector<AcquisitionStructure>& all2() {
  static const auto v = enumerate_all(2);
  return v;
}

AcquisitionStructure swap01(const AcquisitionStructure& as) {
  const auto sw = [](LockId l) -> LockId { return l == 0 ? 1 : l == 1 ? 0 : l; };
  const auto set = [&](LockSet s) {
    LockSet o;
    for (auto l : s.members()) o = o.with(sw(l));
    return o;
  };
  const auto graph = [&](LockGraph g) {
    LockGraph o;
    for (LockId a = 0; a < kMaxLocks; ++a)
      for (auto b : g.successors(a).members()) o = o.with_edge(sw(a), sw(b));
    return o;
  };
  return {set(as.initial_releases), graph(as.release_graph), set(as.usages),
          graph(as.acquisition_graph), set(as.final_acquisitions),
          set(as.initially_held)};
}

}  // namespace

TEST_CASE("is_consistent examples", "[acq]") {
  CHECK(is_consistent({}));
  AcquisitionStructure cyc;
  cyc.release_graph = E({{l1, l2}, {l2, l1}});
  CHECK_FALSE(is_consistent(cyc));
  AcquisitionStructure held;
  held.initially_held = S({l1});
  held.usages = S({l1});
  CHECK_FALSE(is_consistent(held));
  held.initial_releases = S({l1});
  CHECK(is_consistent(held));
  AcquisitionStructure self;
  self.acquisition_graph = E({{l1, l1}});
  CHECK_FALSE(is_consistent(self));
}

TEST_CASE("compatible examples", "[acq]") {
  CHECK(compatible({}, {}));
  AcquisitionStructure a, b;
  a.initially_held = S({l1});
  b.initially_held = S({l1});
  CHECK_FALSE(compatible(a, b));
  a = b = {};
  a.acquisition_graph = E({{l1, l2}});
  b.acquisition_graph = E({{l2, l1}});
  CHECK_FALSE(compatible(a, b));
  a = b = {};
  a.final_acquisitions = S({l1});
  b.final_acquisitions = S({l1});
  CHECK_FALSE(compatible(a, b));
  AcquisitionStructure bad;
  bad.release_graph = E({{l1, l1}});
  CHECK_THROWS_AS(compatible(bad, {}), std::invalid_argument);
}

TEST_CASE("compatible matches the six conditions and is symmetric (2 locks)",
          "[acq][exhaustive]") {
  const auto& all = all2();
  std::size_t violations = 0;
  for (const auto& a : all)
    for (const auto& b : all) {
      const bool c = compatible(a, b);
      if (c != compatible(b, a) || c != literal_compatible(a, b)) ++violations;
    }
  CHECK(violations == 0);
}

TEST_CASE("compatible is symmetric (3 locks, random)", "[acq][random]") {
  std::mt19937 rng(7);
  std::size_t checked = 0, violations = 0;
  while (checked < 10000) {
    const auto a = testing::random_structure(rng, 3);
    const auto b = testing::random_structure(rng, 3);
    if (!is_consistent(a) || !is_consistent(b)) continue;
    ++checked;
    if (compatible(a, b) != compatible(b, a) ||
        compatible(a, b) != literal_compatible(a, b))
      ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("enumerate_all against brute force", "[acq][exhaustive]") {
  CHECK(enumerate_all(0).size() == 1);
  CHECK(enumerate_all(0)[0] == AcquisitionStructure{});
  for (std::size_t n : {1, 2}) {
    INFO("locks " << n);
    auto e = enumerate_all(n);
    auto b = brute_force_structures(n);
    std::sort(e.begin(), e.end());
    std::sort(b.begin(), b.end());
    CHECK(std::adjacent_find(e.begin(), e.end()) == e.end());
    CHECK(e == b);
    CHECK(static_cast<double>(e.size()) == structure_space_size(n));
  }
  CHECK_THROWS_AS(enumerate_all(4), ResourceLimit);
}

TEST_CASE("enumerate_all is closed under lock renaming", "[acq]") {
  const std::set<AcquisitionStructure> all(all2().begin(), all2().end());
  for (const auto& as : all) CHECK(all.count(swap01(as)) == 1);
}

TEST_CASE("merge", "[acq]") {
  std::mt19937 rng(9);
  for (const auto& x : all2()) CHECK(merge(x, {}) == x);
  AcquisitionStructure spawned;
  spawned.initially_held = S({l1});
  CHECK_THROWS_AS(merge({}, spawned), std::invalid_argument);

  std::size_t checked = 0;
  while (checked < 2000) {
    const auto& a = all2()[rng() % all2().size()];
    const auto& b = all2()[rng() % all2().size()];
    if (!b.initial_releases.empty() || !b.initially_held.empty() || !compatible(a, b))
      continue;
    ++checked;
    const auto m = merge(a, b);
    CHECK(m.initial_releases == (a.initial_releases | b.initial_releases));
    CHECK(m.release_graph == (a.release_graph | b.release_graph));
    CHECK(m.usages == (a.usages | b.usages));
    CHECK(m.acquisition_graph == (a.acquisition_graph | b.acquisition_graph));
    CHECK(m.final_acquisitions == (a.final_acquisitions | b.final_acquisitions));
    CHECK(m.initially_held == (a.initially_held | b.initially_held));
  }
}

TEST_CASE("rel_update", "[acq]") {
  const auto r = rel_update({}, l1);
  REQUIRE(r);
  CHECK(*r == AcquisitionStructure{S({l1}), {}, {}, {}, {}, S({l1})});
  AcquisitionStructure held;
  held.initially_held = S({l1});
  CHECK_FALSE(rel_update(held, l1));
  std::size_t bad = 0;
  for (const auto& as : all2())
    for (LockId l : {l1, l2}) {
      const auto out = rel_update(as, l);
      if (out && !is_consistent(*out)) ++bad;
    }
  CHECK(bad == 0);
}

TEST_CASE("acq_update", "[acq]") {
  const AcquisitionStructure pending{S({l1}), {}, {}, {}, {}, S({l1})};
  CHECK(acq_update(pending, l1) == AcquisitionStructure{{}, {}, S({l1}), {}, {}, {}});

  // the structure at the root of the fig1 tree
  const AcquisitionStructure before{{}, {}, S({l2, l3}), {}, {}, S({l1})};
  CHECK(acq_update(before, l1) ==
        AcquisitionStructure{{}, {}, S({l2, l3}), E({{l1, l2}, {l1, l3}}), S({l1}), {}});

  AcquisitionStructure again;
  again.final_acquisitions = S({l1});
  again.initially_held = S({l1});
  CHECK_FALSE(acq_update(again, l1));
  CHECK_FALSE(acq_update({}, l1));

  // case 1 also redirects the release graph
  const AcquisitionStructure two{S({l1, l2}), E({{l3, l1}}), S({l3}), {}, {}, S({l1, l2})};
  const auto out = acq_update(two, l1);
  REQUIRE(out);
  CHECK(out->release_graph == E({{l1, l2}}));
  CHECK(out->initial_releases == S({l2}));
  CHECK(out->usages == S({l1, l3}));
}

TEST_CASE("single-rule tables equal the transformers (2 locks)", "[acq][exhaustive]") {
  std::size_t violations = 0;
  for (const auto& as : all2())
    for (const auto& a : actions(2))
      if (literal_rule1(as, a) != transform(as, a)) ++violations;
  CHECK(violations == 0);
}

TEST_CASE("spawn-rule tables equal transformer after merge (2 locks)",
          "[acq][exhaustive]") {
  std::vector<AcquisitionStructure> children;
  for (const auto& as : all2())
    if (as.initial_releases.empty() && as.initially_held.empty()) children.push_back(as);
  std::size_t violations = 0, pairs = 0;
  for (const auto& c : all2())
    for (const auto& d : children) {
      if (!compatible(c, d)) continue;
      ++pairs;
      for (const auto& a : actions(2))
        if (literal_rule2(c, d, a) != transform(merge(c, d), a)) ++violations;
    }
  CHECK(pairs > 0);
  CHECK(violations == 0);
}

TEST_CASE("transformer_preimages inverts the transformers", "[acq][exhaustive]") {
  for (const auto& a : actions(2)) {
    std::set<std::pair<AcquisitionStructure, AcquisitionStructure>> forward;
    for (const auto& m : testing::brute_force_structures(2)) {
      const auto t = transform(m, a);
      if (t) forward.insert({*t, m});
    }
    std::set<std::pair<AcquisitionStructure, AcquisitionStructure>> backward;
    for (const auto& after : all2())
      for (const auto& m : transformer_preimages(after, a, 2))
        if (is_consistent(m)) backward.insert({after, m});
    std::set<std::pair<AcquisitionStructure, AcquisitionStructure>> consistent;
    for (const auto& [t, m] : forward)
      if (is_consistent(t)) consistent.insert({t, m});
    CHECK(backward == consistent);
  }
}

TEST_CASE("render is sorted and stable", "[acq]") {
  const AcquisitionStructure as{{}, {}, S({l2, l3}), E({{l1, l3}, {l1, l2}}), S({l1}), {}};
  CHECK(render(as, {"l1", "l2", "l3"}) ==
        "R={} RH={} U={l2,l3} AH={(l1,l2),(l1,l3)} A={l1} X={}");
  CHECK(fingerprint(as) == fingerprint(AcquisitionStructure(as)));
  CHECK(fingerprint(as) != fingerprint({}));
}
