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
#include <vector>

namespace ldpn {

// Strongly connected components of a directed graph given as adjacency
// lists. Component ids are assigned in reverse topological order (a
// component's successors get smaller ids). Iterative, so deep graphs are fine.
struct SccResult {
  std::vector<std::uint32_t> component;  // per node
  std::uint32_t count = 0;
};

SccResult strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& successors);

// Nodes reachable from `sources` (inclusive).
std::vector<bool> reachable_from(
    const std::vector<std::vector<std::uint32_t>>& successors,
    const std::vector<std::uint32_t>& sources);

}  // namespace ldpn
