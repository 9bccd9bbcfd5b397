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

#include "ldpn/lockset.hpp"

#include <array>

namespace ldpn {

bool LockGraph::acyclic() const {
  // 0 = unvisited, 1 = on the current path, 2 = finished
  std::array<std::uint8_t, kMaxLocks> color{};
  std::array<std::pair<LockId, std::uint8_t>, kMaxLocks> stack{};
  for (LockId start = 0; start < kMaxLocks; ++start) {
    if (color[start] != 0) continue;
    std::size_t depth = 0;
    stack[depth++] = {start, successors(start).bits()};
    color[start] = 1;
    while (depth > 0) {
      auto& [node, pending] = stack[depth - 1];
      if (pending == 0) {
        color[node] = 2;
        --depth;
        continue;
      }
      const auto next = static_cast<LockId>(std::countr_zero(pending));
      pending = static_cast<std::uint8_t>(pending & (pending - 1));
      if (color[next] == 1) return false;
      if (color[next] == 0) {
        color[next] = 1;
        stack[depth++] = {next, successors(next).bits()};
      }
    }
  }
  return true;
}

namespace {

std::string lock_name(LockId id, const std::vector<std::string>& names) {
  if (id < names.size()) return names[id];
  return "l" + std::to_string(id + 1);
}

}  // namespace

std::string render_lockset(LockSet set, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (LockId l : set.members()) {
    if (!first) out += ",";
    out += lock_name(l, names);
    first = false;
  }
  return out + "}";
}

std::string render_lockgraph(LockGraph graph,
                             const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (LockId from = 0; from < kMaxLocks; ++from) {
    for (LockId to : graph.successors(from).members()) {
      if (!first) out += ",";
      out += "(" + lock_name(from, names) + "," + lock_name(to, names) + ")";
      first = false;
    }
  }
  return out + "}";
}

}  // namespace ldpn
