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

#include "ldpn/dot.hpp"

#include <sstream>

namespace ldpn {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string dclic_suffix(DclicSet d) {
  if (d == 0) return "";
  std::string out = " {";
  bool first = true;
  for (std::size_t i = 0; i < kMaxAnnotatedDclics; ++i)
    if ((d >> i) & 1u) {
      if (!first) out += ",";
      out += "d" + std::to_string(i);
      first = false;
    }
  return out + "}";
}

}  // namespace

std::string buchi_to_dot(const BuchiAutomaton& b) {
  std::ostringstream out;
  out << "digraph buchi {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::uint32_t s = 0; s < b.state_count(); ++s)
    out << "  s" << s << " [shape=" << (b.accepting(s) ? "doublecircle" : "circle")
        << "];\n";
  out << "  init -> s" << b.initial() << ";\n";
  for (const auto& t : b.transitions())
    out << "  s" << t.from << " -> s" << t.to
        << " [label=" << quote(render_guard(t.guard, b.props())) << "];\n";
  out << "}\n";
  return out.str();
}

std::string ma_to_dot(const MultiAutomaton& a, const LockDpnModel& m) {
  std::ostringstream out;
  out << "digraph ma {\n  rankdir=LR;\n";
  for (std::uint32_t s = 0; s < a.state_count(); ++s)
    out << "  q" << s << " [label=" << quote(a.state_names[s])
        << ", shape=" << (a.accepting[s] ? "doublecircle" : "circle") << "];\n";
  for (std::size_t i = 0; i < a.initials.size(); ++i) {
    const auto& init = a.initials[i];
    std::string label = m.controls()[init.control];
    if (init.locks) label += " " + render_lockset(*init.locks, m.locks());
    out << "  i" << i << " [shape=plaintext, label=" << quote(label) << "];\n";
    out << "  i" << i << " -> q" << init.state << ";\n";
  }
  for (const auto& t : a.transitions)
    out << "  q" << t.from << " -> q" << t.to << " [label="
        << quote(m.symbols()[t.symbol] + dclic_suffix(t.dclics)) << "];\n";
  out << "}\n";
  return out.str();
}

std::string model_to_dot(const LockDpnModel& m) {
  std::ostringstream out;
  out << "digraph model {\n";
  for (std::size_t d = 0; d < m.dpds().size(); ++d) {
    out << "  subgraph cluster_" << d << " {\n    label=" << quote(m.dpds()[d].name)
        << ";\n";
    for (ControlId c : m.dpds()[d].controls)
      out << "    c" << c << " [label=" << quote(m.controls()[c]) << "];\n";
    out << "  }\n";
  }
  for (const auto& r : m.rules()) {
    std::string label = m.symbols()[r.symbol] + " / " + render_action(m, r.action) +
                        " / " + render_stack(m, r.push);
    out << "  c" << r.from << " -> c" << r.to << " [label=" << quote(label) << "];\n";
    if (r.spawn)
      out << "  c" << r.from << " -> c" << m.dclics()[*r.spawn].control
          << " [style=dashed, label="
          << quote(render_stack(m, m.dclics()[*r.spawn].stack)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string reduced_to_dot(const ReducedDpn& reduced) {
  return model_to_dot(reduced.dpn);
}

std::string run_tree_to_dot(const GlobalRunTree& tree, const LockDpnModel& m) {
  std::ostringstream out;
  out << "digraph run {\n";
  const auto& nodes = tree.nodes();
  for (std::uint32_t i = 0; i < nodes.size(); ++i)
    out << "  n" << i << " [label=" << quote(render_config(m, nodes[i].config))
        << "];\n";
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    const RunNode& n = nodes[i];
    if (!n.rule) continue;
    const std::string action = render_action(m, m.rules()[*n.rule].action);
    if (n.right)
      out << "  n" << i << " -> n" << *n.right << " [label=" << quote(action)
          << "];\n";
    if (n.left)
      out << "  n" << i << " -> n" << *n.left << " [style=dashed, label="
          << quote(action) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ldpn
