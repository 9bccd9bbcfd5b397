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

#include "ldpn/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "ldpn/error.hpp"

namespace ldpn {

struct LtlFormula::Node {
  LtlKind kind;
  std::string name;
  std::vector<LtlFormula> children;
};

LtlFormula::LtlFormula(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

LtlFormula LtlFormula::truth() {
  static const LtlFormula f(std::make_shared<const Node>(
      Node{LtlKind::kTrue, {}, {}}));
  return f;
}

LtlFormula LtlFormula::falsity() {
  static const LtlFormula f(std::make_shared<const Node>(
      Node{LtlKind::kFalse, {}, {}}));
  return f;
}

LtlFormula LtlFormula::atom(std::string name) {
  return LtlFormula(
      std::make_shared<const Node>(Node{LtlKind::kAtom, std::move(name), {}}));
}

LtlFormula LtlFormula::negation(LtlFormula operand) {
  return LtlFormula(std::make_shared<const Node>(
      Node{LtlKind::kNot, {}, {std::move(operand)}}));
}

LtlFormula LtlFormula::conjunction(LtlFormula left, LtlFormula right) {
  return LtlFormula(std::make_shared<const Node>(
      Node{LtlKind::kAnd, {}, {std::move(left), std::move(right)}}));
}

LtlFormula LtlFormula::disjunction(LtlFormula left, LtlFormula right) {
  return LtlFormula(std::make_shared<const Node>(
      Node{LtlKind::kOr, {}, {std::move(left), std::move(right)}}));
}

LtlFormula LtlFormula::next(LtlFormula operand) {
  return LtlFormula(std::make_shared<const Node>(
      Node{LtlKind::kNext, {}, {std::move(operand)}}));
}

LtlFormula LtlFormula::until(LtlFormula left, LtlFormula right) {
  return LtlFormula(std::make_shared<const Node>(
      Node{LtlKind::kUntil, {}, {std::move(left), std::move(right)}}));
}

LtlFormula LtlFormula::release(LtlFormula left, LtlFormula right) {
  return LtlFormula(std::make_shared<const Node>(
      Node{LtlKind::kRelease, {}, {std::move(left), std::move(right)}}));
}

LtlFormula LtlFormula::eventually(LtlFormula operand) {
  return until(truth(), std::move(operand));
}

LtlFormula LtlFormula::always(LtlFormula operand) {
  return release(falsity(), std::move(operand));
}

LtlKind LtlFormula::kind() const { return node_->kind; }
const std::string& LtlFormula::name() const { return node_->name; }
std::size_t LtlFormula::arity() const { return node_->children.size(); }
const LtlFormula& LtlFormula::left() const { return node_->children.at(0); }
const LtlFormula& LtlFormula::right() const { return node_->children.at(1); }

std::size_t LtlFormula::operator_count() const {
  std::size_t n = arity() > 0 ? 1 : 0;
  for (const auto& c : node_->children) n += c.operator_count();
  return n;
}

int compare(const LtlFormula& a, const LtlFormula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() == LtlKind::kAtom) return a.name().compare(b.name());
  for (std::size_t i = 0; i < a.arity(); ++i) {
    const int c = compare(a.node_->children[i], b.node_->children[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool operator==(const LtlFormula& a, const LtlFormula& b) {
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { kIdent, kTrue, kFalse, kNot, kAnd, kOr, kX, kF, kG, kU, kR,
                 kLParen, kRParen, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::kLParen, "(", i++}); continue;
      case ')': out.push_back({Tok::kRParen, ")", i++}); continue;
      case '!': out.push_back({Tok::kNot, "!", i++}); continue;
      case '&': out.push_back({Tok::kAnd, "&", i++}); continue;
      case '|': out.push_back({Tok::kOr, "|", i++}); continue;
      default: break;
    }
    if (!ident_start(c))
      throw ParseError(std::string("unknown token '") + c + "'", i);
    const std::size_t start = i;
    while (i < text.size() && ident_char(text[i])) ++i;
    std::string word(text.substr(start, i - start));
    Tok kind = Tok::kIdent;
    if (word == "true") kind = Tok::kTrue;
    else if (word == "false") kind = Tok::kFalse;
    else if (word == "X") kind = Tok::kX;
    else if (word == "F") kind = Tok::kF;
    else if (word == "G") kind = Tok::kG;
    else if (word == "U") kind = Tok::kU;
    else if (word == "R") kind = Tok::kR;
    out.push_back({kind, std::move(word), start});
  }
  out.push_back({Tok::kEnd, "", text.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  LtlFormula parse() {
    LtlFormula f = parse_or();
    if (peek().kind != Tok::kEnd)
      throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& take() { return tokens_[index_++]; }

  LtlFormula parse_or() {
    LtlFormula f = parse_and();
    while (peek().kind == Tok::kOr) {
      take();
      f = LtlFormula::disjunction(std::move(f), parse_and());
    }
    return f;
  }

  LtlFormula parse_and() {
    LtlFormula f = parse_binary_temporal();
    while (peek().kind == Tok::kAnd) {
      take();
      f = LtlFormula::conjunction(std::move(f), parse_binary_temporal());
    }
    return f;
  }

  LtlFormula parse_binary_temporal() {
    LtlFormula f = parse_unary();
    if (peek().kind == Tok::kU) {
      take();
      return LtlFormula::until(std::move(f), parse_binary_temporal());
    }
    if (peek().kind == Tok::kR) {
      take();
      return LtlFormula::release(std::move(f), parse_binary_temporal());
    }
    return f;
  }

  LtlFormula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNot: take(); return LtlFormula::negation(parse_unary());
      case Tok::kX: take(); return LtlFormula::next(parse_unary());
      case Tok::kF: take(); return LtlFormula::eventually(parse_unary());
      case Tok::kG: take(); return LtlFormula::always(parse_unary());
      default: return parse_primary();
    }
  }

  LtlFormula parse_primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::kTrue: return LtlFormula::truth();
      case Tok::kFalse: return LtlFormula::falsity();
      case Tok::kIdent: return LtlFormula::atom(t.text);
      case Tok::kLParen: {
        LtlFormula f = parse_or();
        if (peek().kind != Tok::kRParen)
          throw ParseError("expected ')'", peek().pos);
        take();
        return f;
      }
      case Tok::kEnd:
        throw ParseError("missing operand", t.pos);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

LtlFormula nnf(const LtlFormula& f, bool negate) {
  using F = LtlFormula;
  switch (f.kind()) {
    case LtlKind::kTrue: return negate ? F::falsity() : F::truth();
    case LtlKind::kFalse: return negate ? F::truth() : F::falsity();
    case LtlKind::kAtom: return negate ? F::negation(f) : f;
    case LtlKind::kNot: return nnf(f.left(), !negate);
    case LtlKind::kAnd:
      return negate ? F::disjunction(nnf(f.left(), true), nnf(f.right(), true))
                    : F::conjunction(nnf(f.left(), false), nnf(f.right(), false));
    case LtlKind::kOr:
      return negate ? F::conjunction(nnf(f.left(), true), nnf(f.right(), true))
                    : F::disjunction(nnf(f.left(), false), nnf(f.right(), false));
    case LtlKind::kNext: return F::next(nnf(f.left(), negate));
    case LtlKind::kUntil:
      return negate ? F::release(nnf(f.left(), true), nnf(f.right(), true))
                    : F::until(nnf(f.left(), false), nnf(f.right(), false));
    case LtlKind::kRelease:
      return negate ? F::until(nnf(f.left(), true), nnf(f.right(), true))
                    : F::release(nnf(f.left(), false), nnf(f.right(), false));
  }
  throw std::logic_error("nnf: unknown kind");
}

void collect_atoms(const LtlFormula& f, std::set<std::string>& out) {
  if (f.kind() == LtlKind::kAtom) out.insert(f.name());
  for (std::size_t i = 0; i < f.arity(); ++i)
    collect_atoms(i == 0 ? f.left() : f.right(), out);
}

}  // namespace

LtlFormula parse_ltl(std::string_view text) {
  return Parser(tokenize(text)).parse();
}

LtlFormula to_nnf(const LtlFormula& formula) { return nnf(formula, false); }

bool is_nnf(const LtlFormula& f) {
  if (f.kind() == LtlKind::kNot) return f.left().kind() == LtlKind::kAtom;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (!is_nnf(i == 0 ? f.left() : f.right())) return false;
  return true;
}

std::string to_string(const LtlFormula& f) {
  switch (f.kind()) {
    case LtlKind::kTrue: return "true";
    case LtlKind::kFalse: return "false";
    case LtlKind::kAtom: return f.name();
    case LtlKind::kNot: return "!" + to_string(f.left());
    case LtlKind::kNext: return "X " + to_string(f.left());
    case LtlKind::kAnd:
      return "(" + to_string(f.left()) + " & " + to_string(f.right()) + ")";
    case LtlKind::kOr:
      return "(" + to_string(f.left()) + " | " + to_string(f.right()) + ")";
    case LtlKind::kUntil:
      return "(" + to_string(f.left()) + " U " + to_string(f.right()) + ")";
    case LtlKind::kRelease:
      return "(" + to_string(f.left()) + " R " + to_string(f.right()) + ")";
  }
  return "?";
}

std::vector<std::string> atoms(const LtlFormula& formula) {
  std::set<std::string> out;
  collect_atoms(formula, out);
  return {out.begin(), out.end()};
}

}  // namespace ldpn
