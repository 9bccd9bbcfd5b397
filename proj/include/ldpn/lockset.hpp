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

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace ldpn {

using LockId = std::uint8_t;

// Lock sets and lock graphs are bitsets; the whole tool handles at most this
// many locks.
inline constexpr std::size_t kMaxLocks = 8;

class LockSet {
 public:
  constexpr LockSet() = default;
  constexpr explicit LockSet(std::uint8_t bits) : bits_(bits) {}

  static constexpr LockSet single(LockId lock) {
    return LockSet(static_cast<std::uint8_t>(1u << lock));
  }
  static constexpr LockSet all(std::size_t lock_count) {
    return LockSet(static_cast<std::uint8_t>((1u << lock_count) - 1u));
  }

  constexpr bool contains(LockId lock) const { return (bits_ >> lock) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return std::popcount(bits_); }
  constexpr std::uint8_t bits() const { return bits_; }

  constexpr LockSet with(LockId lock) const { return *this | single(lock); }
  constexpr LockSet without(LockId lock) const { return *this - single(lock); }
  constexpr bool subset_of(LockSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  friend constexpr LockSet operator|(LockSet a, LockSet b) {
    return LockSet(static_cast<std::uint8_t>(a.bits_ | b.bits_));
  }
  friend constexpr LockSet operator&(LockSet a, LockSet b) {
    return LockSet(static_cast<std::uint8_t>(a.bits_ & b.bits_));
  }
  // set difference
  friend constexpr LockSet operator-(LockSet a, LockSet b) {
    return LockSet(static_cast<std::uint8_t>(a.bits_ & ~b.bits_));
  }

  friend constexpr auto operator<=>(LockSet, LockSet) = default;

  std::vector<LockId> members() const {
    std::vector<LockId> out;
    for (LockId l = 0; l < kMaxLocks; ++l)
      if (contains(l)) out.push_back(l);
    return out;
  }

 private:
  std::uint8_t bits_ = 0;
};

// Directed graph over locks, stored as an 8x8 adjacency bit matrix.
class LockGraph {
 public:
  constexpr LockGraph() = default;
  constexpr explicit LockGraph(std::uint64_t bits) : bits_(bits) {}

  constexpr bool has_edge(LockId from, LockId to) const {
    return (bits_ >> bit(from, to)) & 1u;
  }
  constexpr LockGraph with_edge(LockId from, LockId to) const {
    return LockGraph(bits_ | (std::uint64_t{1} << bit(from, to)));
  }
  constexpr LockSet successors(LockId from) const {
    return LockSet(static_cast<std::uint8_t>(bits_ >> (8 * from)));
  }
  // Drops every edge that ends in `to`.
  constexpr LockGraph without_edges_into(LockId to) const {
    return LockGraph(bits_ & ~(kColumn << to));
  }
  // Adds {from} x targets.
  constexpr LockGraph with_edges_from(LockId from, LockSet targets) const {
    return LockGraph(bits_ | (std::uint64_t{targets.bits()} << (8 * from)));
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }
  constexpr std::size_t edge_count() const { return std::popcount(bits_); }

  // Cycle check by iterative depth-first search (self-loops count as cycles).
  bool acyclic() const;

  friend constexpr LockGraph operator|(LockGraph a, LockGraph b) {
    return LockGraph(a.bits_ | b.bits_);
  }
  friend constexpr auto operator<=>(LockGraph, LockGraph) = default;

 private:
  static constexpr std::uint64_t kColumn = 0x0101010101010101ull;
  static constexpr unsigned bit(LockId from, LockId to) {
    return 8u * from + to;
  }

  std::uint64_t bits_ = 0;
};

std::string render_lockset(LockSet set, const std::vector<std::string>& names);
std::string render_lockgraph(LockGraph graph,
                             const std::vector<std::string>& names);

}  // namespace ldpn
