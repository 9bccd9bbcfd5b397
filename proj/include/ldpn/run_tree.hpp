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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ldpn/acq.hpp"
#include "ldpn/model.hpp"

namespace ldpn {

struct EnabledStep {
  std::uint32_t element;  // index into the global configuration
  std::uint32_t rule;
  friend auto operator<=>(const EnabledStep&, const EnabledStep&) = default;
};

// Steps whose guard holds: tau always, acq(l) when l is free, rel(l) when the
// element itself holds l. Ordered by element, then rule id.
std::vector<EnabledStep> enabled_steps(const GlobalConfiguration& config,
                                       const LockDpnModel& model);

struct Successor {
  LocalConfiguration next;
  std::optional<LocalConfiguration> spawned;
};

// Applies `rule` to a configuration whose head matches it. Guards are not
// checked here.
Successor apply_rule(const LockDpnModel& model, const LocalConfiguration& config,
                     std::uint32_t rule);

struct RunNode {
  LocalConfiguration config;
  std::optional<std::uint32_t> rule;  // set once the node is expanded
  std::optional<std::uint32_t> right;  // same instance
  std::optional<std::uint32_t> left;   // spawned instance
  std::optional<std::uint32_t> parent;
  std::size_t step = 0;  // scheduler step that expanded the node
};

struct SchedulerStep {
  std::size_t step;
  std::uint32_t leaf;
  std::uint32_t rule;
  friend bool operator==(const SchedulerStep&, const SchedulerStep&) = default;
};

// Finite prefix of a global run. Starting from a global configuration with
// several elements gives one root per element.
class GlobalRunTree {
 public:
  GlobalRunTree() = default;
  explicit GlobalRunTree(const GlobalConfiguration& start);

  const std::vector<RunNode>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& roots() const { return roots_; }
  const std::vector<SchedulerStep>& trace() const { return trace_; }

  // Unexpanded nodes in creation order.
  std::vector<std::uint32_t> leaves() const;
  GlobalConfiguration configuration() const;

  // Throws ValidationError when the step is not enabled at the current leaves.
  void expand(const LockDpnModel& model, std::uint32_t leaf, std::uint32_t rule);

  friend bool operator==(const GlobalRunTree& a, const GlobalRunTree& b) {
    return a.trace_ == b.trace_ && a.roots_.size() == b.roots_.size() &&
           a.nodes_.size() == b.nodes_.size() &&
           std::equal(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(),
                      [](const RunNode& x, const RunNode& y) {
                        return x.config == y.config && x.rule == y.rule &&
                               x.right == y.right && x.left == y.left;
                      });
  }

 private:
  std::vector<RunNode> nodes_;
  std::vector<std::uint32_t> roots_;
  std::vector<SchedulerStep> trace_;
};

GlobalRunTree replay(const LockDpnModel& model, const GlobalConfiguration& start,
                     const std::vector<SchedulerStep>& trace);

// Scheduler traces as text: whitespace-separated "leaf:rule" pairs, '#'
// starting a comment line. Steps are numbered in order.
std::vector<SchedulerStep> parse_trace(std::string_view text);

struct ExploreOptions {
  std::size_t depth = 0;
  // Keep every maximal prefix instead of one witness per configuration.
  bool keep_all_prefixes = false;
  std::size_t max_configurations = 200000;
  std::size_t max_prefixes = 200000;
};

struct ExploreResult {
  // Distinct configurations (as canonical multisets) in discovery order.
  std::vector<GlobalConfiguration> configurations;
  // Dedupe mode: witnesses[i] reaches configurations[i]. Keep-all mode: every
  // schedule of length `depth`, or shorter when it gets stuck.
  std::vector<GlobalRunTree> trees;
};

// Throws ResourceLimit when a cap is exceeded.
ExploreResult explore_bounded(const LockDpnModel& model,
                              const GlobalConfiguration& start,
                              const ExploreOptions& options);

// Every local run releases only its most recent open acquisition and never
// re-acquires a lock it holds.
bool check_nested(const GlobalRunTree& tree, const LockDpnModel& model);

// Structure of the subtree rooted at `node`, whose instance holds `held` at
// that node. Unmatched acquisitions of the finite prefix count as final;
// before/after compares acquisition steps in scheduler order.
AcquisitionStructure acq_structure_of_tree(const GlobalRunTree& tree,
                                           const LockDpnModel& model,
                                           std::uint32_t node, LockSet held);
AcquisitionStructure acq_structure_of_tree(const GlobalRunTree& tree,
                                           const LockDpnModel& model,
                                           LockSet held);

}  // namespace ldpn
