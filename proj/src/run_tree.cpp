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

#include "ldpn/run_tree.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <deque>
#include <map>

#include "ldpn/error.hpp"

namespace ldpn {

std::vector<EnabledStep> enabled_steps(const GlobalConfiguration& config,
                                       const LockDpnModel& model) {
  std::vector<EnabledStep> out;
  const LockSet free = config.free(model.locks().size());
  const auto& elements = config.elements();
  for (std::uint32_t e = 0; e < elements.size(); ++e) {
    const auto& c = elements[e];
    if (c.stack.empty()) continue;
    for (auto ri : model.rules_from(c.control, c.stack.front())) {
      const Action& a = model.rules()[ri].action;
      const bool ok = a.kind == ActionKind::kTau ||
                      (a.kind == ActionKind::kAcquire && free.contains(a.lock)) ||
                      (a.kind == ActionKind::kRelease && c.locks.contains(a.lock));
      if (ok) out.push_back({e, ri});
    }
  }
  return out;
}

Successor apply_rule(const LockDpnModel& model, const LocalConfiguration& c,
                     std::uint32_t rule) {
  const Rule& r = model.rules()[rule];
  Successor s;
  s.next.control = r.to;
  s.next.stack = r.push;
  s.next.stack.insert(s.next.stack.end(), c.stack.begin() + 1, c.stack.end());
  s.next.locks = c.locks;
  if (r.action.kind == ActionKind::kAcquire)
    s.next.locks = c.locks.with(r.action.lock);
  else if (r.action.kind == ActionKind::kRelease)
    s.next.locks = c.locks.without(r.action.lock);
  if (r.spawn) {
    const Dclic& d = model.dclics()[*r.spawn];
    s.spawned = LocalConfiguration{d.control, d.stack, LockSet{}};
  }
  return s;
}

GlobalRunTree::GlobalRunTree(const GlobalConfiguration& start) {
  for (const auto& c : start.elements()) {
    roots_.push_back(static_cast<std::uint32_t>(nodes_.size()));
    nodes_.push_back(RunNode{c, {}, {}, {}, {}, 0});
  }
}

std::vector<std::uint32_t> GlobalRunTree::leaves() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i)
    if (!nodes_[i].rule) out.push_back(i);
  return out;
}

GlobalConfiguration GlobalRunTree::configuration() const {
  std::vector<LocalConfiguration> elements;
  for (auto i : leaves()) elements.push_back(nodes_[i].config);
  return GlobalConfiguration(std::move(elements));
}

void GlobalRunTree::expand(const LockDpnModel& model, std::uint32_t leaf,
                           std::uint32_t rule) {
  const auto current = leaves();
  const auto pos = std::find(current.begin(), current.end(), leaf);
  if (pos == current.end())
    throw ValidationError("run tree: node " + std::to_string(leaf) +
                          " is not a leaf");
  const auto element = static_cast<std::uint32_t>(pos - current.begin());
  const auto steps = enabled_steps(configuration(), model);
  if (std::find(steps.begin(), steps.end(), EnabledStep{element, rule}) ==
      steps.end())
    throw ValidationError("run tree: rule " + std::to_string(rule) +
                          " is not enabled at node " + std::to_string(leaf));
  Successor s = apply_rule(model, nodes_[leaf].config, rule);
  const std::size_t step = trace_.size();
  nodes_[leaf].rule = rule;
  nodes_[leaf].step = step;
  const auto right = static_cast<std::uint32_t>(nodes_.size());
  nodes_[leaf].right = right;
  nodes_.push_back(RunNode{std::move(s.next), {}, {}, {}, leaf, 0});
  if (s.spawned) {
    const auto left = static_cast<std::uint32_t>(nodes_.size());
    nodes_[leaf].left = left;
    nodes_.push_back(RunNode{std::move(*s.spawned), {}, {}, {}, leaf, 0});
  }
  trace_.push_back({step, leaf, rule});
}

GlobalRunTree replay(const LockDpnModel& model, const GlobalConfiguration& start,
                     const std::vector<SchedulerStep>& trace) {
  GlobalRunTree t(start);
  for (const auto& s : trace) t.expand(model, s.leaf, s.rule);
  return t;
}

std::vector<SchedulerStep> parse_trace(std::string_view text) {
  std::vector<SchedulerStep> out;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream words(line);
    std::string word;
    while (words >> word) {
      const auto colon = word.find(':');
      std::uint32_t leaf = 0, rule = 0;
      const char* end = word.data() + word.size();
      if (colon == std::string::npos ||
          std::from_chars(word.data(), word.data() + colon, leaf).ptr !=
              word.data() + colon ||
          std::from_chars(word.data() + colon + 1, end, rule).ptr != end)
        throw ParseError("trace: expected leaf:rule, got '" + word + "'");
      out.push_back({out.size(), leaf, rule});
    }
  }
  return out;
}

ExploreResult explore_bounded(const LockDpnModel& model,
                              const GlobalConfiguration& start,
                              const ExploreOptions& options) {
  ExploreResult result;
  std::map<std::vector<LocalConfiguration>, std::size_t> seen;
  const auto record = [&](const GlobalRunTree& t) {
    GlobalConfiguration g = t.configuration();
    auto key = g.canonical();
    if (seen.count(key)) return false;
    if (seen.size() >= options.max_configurations)
      throw ResourceLimit("exploration exceeded " +
                          std::to_string(options.max_configurations) +
                          " configurations");
    seen.emplace(std::move(key), result.configurations.size());
    result.configurations.push_back(std::move(g));
    return true;
  };

  GlobalRunTree root(start);
  if (!options.keep_all_prefixes) {
    // Breadth-first, so each witness is a shortest schedule.
    record(root);
    result.trees.push_back(root);
    std::deque<std::pair<std::size_t, std::size_t>> work{{0, 0}};
    while (!work.empty()) {
      const auto [index, depth] = work.front();
      work.pop_front();
      if (depth == options.depth) continue;
      const GlobalRunTree tree = result.trees[index];
      const auto leaves = tree.leaves();
      for (const auto& s : enabled_steps(tree.configuration(), model)) {
        GlobalRunTree next = tree;
        next.expand(model, leaves[s.element], s.rule);
        if (record(next)) {
          result.trees.push_back(std::move(next));
          work.emplace_back(result.trees.size() - 1, depth + 1);
        }
      }
    }
    return result;
  }

  std::vector<std::pair<GlobalRunTree, std::size_t>> stack{{root, 0}};
  record(root);
  while (!stack.empty()) {
    auto [tree, depth] = std::move(stack.back());
    stack.pop_back();
    const auto steps = depth < options.depth
                           ? enabled_steps(tree.configuration(), model)
                           : std::vector<EnabledStep>{};
    if (steps.empty()) {
      if (result.trees.size() >= options.max_prefixes)
        throw ResourceLimit("exploration exceeded " +
                            std::to_string(options.max_prefixes) + " prefixes");
      result.trees.push_back(std::move(tree));
      continue;
    }
    const auto leaves = tree.leaves();
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      GlobalRunTree next = tree;
      next.expand(model, leaves[it->element], it->rule);
      record(next);
      stack.emplace_back(std::move(next), depth + 1);
    }
  }
  return result;
}

namespace {

// Node ids of the local runs inside the subtree rooted at `node`; each run is
// listed in order and the first run starts at `node`.
std::vector<std::vector<std::uint32_t>> local_runs(const GlobalRunTree& tree,
                                                   std::uint32_t node) {
  std::vector<std::vector<std::uint32_t>> runs;
  std::vector<std::uint32_t> starts{node};
  while (!starts.empty()) {
    std::uint32_t n = starts.back();
    starts.pop_back();
    std::vector<std::uint32_t> run;
    while (true) {
      run.push_back(n);
      const RunNode& rn = tree.nodes()[n];
      if (rn.left) starts.push_back(*rn.left);
      if (!rn.right) break;
      n = *rn.right;
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace

bool check_nested(const GlobalRunTree& tree, const LockDpnModel& model) {
  std::vector<std::uint32_t> starts = tree.roots();
  for (std::uint32_t i = 0; i < tree.nodes().size(); ++i)
    if (tree.nodes()[i].left) starts.push_back(*tree.nodes()[i].left);
  for (auto start : starts) {
    std::vector<LockId> open;
    std::uint32_t n = start;
    while (tree.nodes()[n].rule) {
      const Action& a = model.rules()[*tree.nodes()[n].rule].action;
      if (a.kind == ActionKind::kAcquire) {
        if (std::find(open.begin(), open.end(), a.lock) != open.end())
          return false;
        open.push_back(a.lock);
      } else if (a.kind == ActionKind::kRelease) {
        if (!open.empty()) {
          if (open.back() != a.lock) return false;
          open.pop_back();
        }
      }
      n = *tree.nodes()[n].right;
    }
  }
  return true;
}

AcquisitionStructure acq_structure_of_tree(const GlobalRunTree& tree,
                                           const LockDpnModel& model,
                                           std::uint32_t node, LockSet held) {
  struct Event {
    LockId lock;
    std::size_t step;
  };
  std::vector<Event> usages, releases, finals;
  for (const auto& run : local_runs(tree, node)) {
    std::vector<Event> open;
    for (auto n : run) {
      const RunNode& rn = tree.nodes()[n];
      if (!rn.rule) break;
      const Action& a = model.rules()[*rn.rule].action;
      if (a.kind == ActionKind::kAcquire) {
        open.push_back({a.lock, rn.step});
      } else if (a.kind == ActionKind::kRelease) {
        const auto it = std::find_if(open.rbegin(), open.rend(),
                                     [&](const Event& e) { return e.lock == a.lock; });
        if (it == open.rend()) {
          releases.push_back({a.lock, rn.step});
        } else {
          usages.push_back(*it);
          open.erase(std::next(it).base());
        }
      }
    }
    finals.insert(finals.end(), open.begin(), open.end());
  }

  AcquisitionStructure as;
  as.initially_held = held;
  for (const auto& r : releases) as.initial_releases = as.initial_releases.with(r.lock);
  for (const auto& u : usages) as.usages = as.usages.with(u.lock);
  for (const auto& f : finals)
    as.final_acquisitions = as.final_acquisitions.with(f.lock);
  for (const auto& u : usages) {
    for (const auto& r : releases)
      if (u.step < r.step) as.release_graph = as.release_graph.with_edge(u.lock, r.lock);
    for (const auto& f : finals)
      if (u.step > f.step)
        as.acquisition_graph = as.acquisition_graph.with_edge(f.lock, u.lock);
  }
  return as;
}

AcquisitionStructure acq_structure_of_tree(const GlobalRunTree& tree,
                                           const LockDpnModel& model,
                                           LockSet held) {
  if (tree.roots().size() != 1)
    throw std::invalid_argument("acq_structure_of_tree: expected a single root");
  return acq_structure_of_tree(tree, model, tree.roots().front(), held);
}

}  // namespace ldpn
