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

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ldpn {

enum class LtlKind : std::uint8_t {
  kTrue,
  kFalse,
  kAtom,
  kNot,
  kAnd,
  kOr,
  kNext,
  kUntil,
  kRelease,
};

// Immutable LTL syntax tree. Copies share nodes.
class LtlFormula {
 public:
  static LtlFormula truth();
  static LtlFormula falsity();
  static LtlFormula atom(std::string name);
  static LtlFormula negation(LtlFormula operand);
  static LtlFormula conjunction(LtlFormula left, LtlFormula right);
  static LtlFormula disjunction(LtlFormula left, LtlFormula right);
  static LtlFormula next(LtlFormula operand);
  static LtlFormula until(LtlFormula left, LtlFormula right);
  static LtlFormula release(LtlFormula left, LtlFormula right);
  // F f = true U f, G f = false R f
  static LtlFormula eventually(LtlFormula operand);
  static LtlFormula always(LtlFormula operand);

  LtlKind kind() const;
  const std::string& name() const;  // atoms only
  std::size_t arity() const;
  const LtlFormula& left() const;   // unary operand or left operand
  const LtlFormula& right() const;  // binary operators only

  // Number of operator nodes (atoms and constants excluded).
  std::size_t operator_count() const;

  friend bool operator==(const LtlFormula& a, const LtlFormula& b);
  // Structural total order, used for canonical sets of formulas.
  friend int compare(const LtlFormula& a, const LtlFormula& b);

 private:
  struct Node;
  explicit LtlFormula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct LtlLess {
  bool operator()(const LtlFormula& a, const LtlFormula& b) const {
    return compare(a, b) < 0;
  }
};

// Grammar:
//   phi ::= true | false | IDENT | !phi | phi & phi | phi | phi | X phi
//         | F phi | G phi | phi U phi | phi R phi | ( phi )
// Precedence: unary > U,R > & > |; U and R associate to the right.
LtlFormula parse_ltl(std::string_view text);

// Negation normal form: negations only directly above atoms.
LtlFormula to_nnf(const LtlFormula& formula);
bool is_nnf(const LtlFormula& formula);

std::string to_string(const LtlFormula& formula);

// Sorted, deduplicated atom names.
std::vector<std::string> atoms(const LtlFormula& formula);

}  // namespace ldpn
