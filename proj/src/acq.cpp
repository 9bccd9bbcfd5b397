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

#include "ldpn/acq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldpn/error.hpp"

namespace ldpn {

namespace {

std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    hash ^= (value >> (8 * i)) & 0xffu;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t encode(const AcquisitionStructure& as) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, as.initial_releases.bits(), 1);
  h = fnv1a(h, as.release_graph.bits(), 8);
  h = fnv1a(h, as.usages.bits(), 1);
  h = fnv1a(h, as.acquisition_graph.bits(), 8);
  h = fnv1a(h, as.final_acquisitions.bits(), 1);
  h = fnv1a(h, as.initially_held.bits(), 1);
  return h;
}

// Acyclic graphs whose edges stay within {0..n-1}.
std::vector<LockGraph> acyclic_graphs(std::size_t n) {
  std::vector<LockGraph> out;
  const std::size_t cells = n * n;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << cells); ++code) {
    LockGraph g;
    for (std::size_t c = 0; c < cells; ++c)
      if ((code >> c) & 1u)
        g = g.with_edge(static_cast<LockId>(c / n), static_cast<LockId>(c % n));
    if (g.acyclic()) out.push_back(g);
  }
  return out;
}

}  // namespace

std::size_t AcquisitionStructureHash::operator()(
    const AcquisitionStructure& as) const noexcept {
  return static_cast<std::size_t>(encode(as));
}

std::uint32_t fingerprint(const AcquisitionStructure& as) {
  const std::uint64_t h = encode(as);
  return static_cast<std::uint32_t>(h ^ (h >> 32));
}

bool is_consistent(const AcquisitionStructure& as) {
  const LockSet held_throughout = as.initially_held - as.initial_releases;
  return as.release_graph.acyclic() && as.acquisition_graph.acyclic() &&
         (held_throughout & (as.usages | as.final_acquisitions)).empty();
}

bool compatible(const AcquisitionStructure& a, const AcquisitionStructure& b) {
  if (!is_consistent(a) || !is_consistent(b))
    throw std::invalid_argument("compatible: inconsistent acquisition structure");
  const LockSet kept_a = a.initially_held - a.initial_releases;
  const LockSet kept_b = b.initially_held - b.initial_releases;
  return (a.initially_held & b.initially_held).empty() &&
         ((a.final_acquisitions | kept_a) & (b.final_acquisitions | kept_b))
             .empty() &&
         (a.release_graph | b.release_graph).acyclic() &&
         (a.acquisition_graph | b.acquisition_graph).acyclic() &&
         ((a.final_acquisitions | a.usages) & kept_b).empty() &&
         ((b.final_acquisitions | b.usages) & kept_a).empty();
}

AcquisitionStructure merge(const AcquisitionStructure& continuation,
                           const AcquisitionStructure& spawned) {
  if (!spawned.initial_releases.empty() || !spawned.initially_held.empty())
    throw std::invalid_argument(
        "merge: spawned structure must have empty R and X");
  if (!compatible(continuation, spawned))
    throw std::invalid_argument("merge: structures are not compatible");
  return {continuation.initial_releases | spawned.initial_releases,
          continuation.release_graph | spawned.release_graph,
          continuation.usages | spawned.usages,
          continuation.acquisition_graph | spawned.acquisition_graph,
          continuation.final_acquisitions | spawned.final_acquisitions,
          continuation.initially_held | spawned.initially_held};
}

std::optional<AcquisitionStructure> rel_update(const AcquisitionStructure& after,
                                               LockId lock) {
  if ((after.initially_held | after.initial_releases).contains(lock))
    return std::nullopt;
  AcquisitionStructure before = after;
  before.initial_releases = after.initial_releases.with(lock);
  before.initially_held = after.initially_held.with(lock);
  return before;
}

std::optional<AcquisitionStructure> acq_update(const AcquisitionStructure& after,
                                               LockId lock) {
  if ((after.initial_releases & after.initially_held).contains(lock)) {
    AcquisitionStructure before = after;
    const LockSet others = after.initial_releases.without(lock);
    before.initial_releases = others;
    before.release_graph =
        after.release_graph.without_edges_into(lock).with_edges_from(lock, others);
    before.usages = after.usages.with(lock);
    before.initially_held = after.initially_held.without(lock);
    return before;
  }
  if (!after.final_acquisitions.contains(lock) &&
      after.initially_held.contains(lock)) {
    AcquisitionStructure before = after;
    before.acquisition_graph =
        after.acquisition_graph.with_edges_from(lock, after.usages);
    before.final_acquisitions = after.final_acquisitions.with(lock);
    before.initially_held = after.initially_held.without(lock);
    return before;
  }
  return std::nullopt;
}

std::vector<AcquisitionStructure> enumerate_all(std::size_t lock_count,
                                                std::size_t limit) {
  if (lock_count > limit || lock_count > kMaxLocks)
    throw ResourceLimit("enumerate_all: " + std::to_string(lock_count) +
                        " locks exceeds the enumeration limit of " +
                        std::to_string(std::min(limit, kMaxLocks)));
  const auto graphs = acyclic_graphs(lock_count);
  const std::uint32_t lock_mask = (1u << lock_count) - 1u;
  const std::uint64_t codes = std::uint64_t{1} << (4 * lock_count);

  std::vector<AcquisitionStructure> out;
  for (LockGraph rh : graphs) {
    for (LockGraph ah : graphs) {
      for (std::uint64_t code = 0; code < codes; ++code) {
        const auto part = [&](int k) {
          return LockSet(static_cast<std::uint8_t>(
              (code >> (k * lock_count)) & lock_mask));
        };
        AcquisitionStructure as{part(0), rh, part(1), ah, part(2), part(3)};
        if (is_consistent(as)) out.push_back(as);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double structure_space_size(std::size_t n) {
  // a(m) = sum_k (-1)^(k+1) C(m,k) 2^(k(m-k)) a(m-k)
  std::vector<double> dags(n + 1, 0.0);
  dags[0] = 1.0;
  for (std::size_t m = 1; m <= n; ++m) {
    double binom = 1.0;
    for (std::size_t k = 1; k <= m; ++k) {
      binom = binom * static_cast<double>(m - k + 1) / static_cast<double>(k);
      const double term =
          binom * std::pow(2.0, static_cast<double>(k * (m - k))) * dags[m - k];
      dags[m] += (k % 2 == 1) ? term : -term;
    }
  }
  return dags[n] * dags[n] * std::pow(13.0, static_cast<double>(n));
}

std::string render(const AcquisitionStructure& as,
                   const std::vector<std::string>& names) {
  return "R=" + render_lockset(as.initial_releases, names) +
         " RH=" + render_lockgraph(as.release_graph, names) +
         " U=" + render_lockset(as.usages, names) +
         " AH=" + render_lockgraph(as.acquisition_graph, names) +
         " A=" + render_lockset(as.final_acquisitions, names) +
         " X=" + render_lockset(as.initially_held, names);
}

}  // namespace ldpn
