// Copyright 2026 The Authors.
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

#include "dbp/formula.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "dbp/error.hpp"
#include "dbp/strings.hpp"

namespace dbp {

namespace {

enum class Tok { kNumber, kIdent, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen, kEnd };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
  double number = 0.0;
};

std::vector<Token> Tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      while (i < s.size() && is_digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          i = j;
          while (i < s.size() && is_digit(s[i])) ++i;
        } else {
          throw FormulaSyntaxError(ErrorCode::kSyntaxError, i, "malformed exponent in number");
        }
      }
      const std::string text(s.substr(start, i - start));
      auto v = ParseDouble(text);
      if (!v) throw FormulaSyntaxError(ErrorCode::kSyntaxError, start, "number out of range '" + text + "'");
      out.push_back({Tok::kNumber, start, text, *v});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::kIdent, start, std::string(s.substr(start, i - start))});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::kPlus; break;
      case '-': kind = Tok::kMinus; break;
      case '*': kind = Tok::kStar; break;
      case '/': kind = Tok::kSlash; break;
      case '^': kind = Tok::kCaret; break;
      case '(': kind = Tok::kLParen; break;
      case ')': kind = Tok::kRParen; break;
      default:
        throw FormulaSyntaxError(ErrorCode::kUnknownCharacter, i,
                                 std::string("unknown character '") + c + "'");
    }
    out.push_back({kind, i, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::kEnd, s.size(), ""});
  return out;
}

ExprPtr Make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::set<std::string>& vars)
      : tokens_(std::move(tokens)), vars_(vars) {}

  ExprPtr ParseAll() {
    ExprPtr e = ParseExpr();
    if (peek().kind != Tok::kEnd) Fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void Fail(const std::string& what) const {
    const Token& t = peek();
    throw FormulaSyntaxError(ErrorCode::kSyntaxError, t.offset,
                             t.kind == Tok::kEnd ? "unexpected end of formula" : what);
  }

  ExprPtr ParseExpr() {
    ExprPtr lhs = ParseTerm();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      const BinaryOp op = next().kind == Tok::kPlus ? BinaryOp::kAdd : BinaryOp::kSub;
      lhs = Make({Binary{op, lhs, ParseTerm()}});
    }
    return lhs;
  }

  ExprPtr ParseTerm() {
    ExprPtr lhs = ParseUnary();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      const BinaryOp op = next().kind == Tok::kStar ? BinaryOp::kMul : BinaryOp::kDiv;
      lhs = Make({Binary{op, lhs, ParseUnary()}});
    }
    return lhs;
  }

  ExprPtr ParseUnary() {
    if (peek().kind == Tok::kMinus) {
      next();
      return Make({Negate{ParseUnary()}});
    }
    return ParsePower();
  }

  ExprPtr ParsePower() {
    ExprPtr base = ParsePrimary();
    if (peek().kind == Tok::kCaret) {
      next();
      return Make({Binary{BinaryOp::kPow, base, ParseUnary()}});
    }
    return base;
  }

  ExprPtr ParsePrimary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNumber:
        next();
        return Make({Constant{t.number}});
      case Tok::kIdent:
        next();
        vars_.insert(t.text);
        return Make({Variable{t.text}});
      case Tok::kLParen: {
        next();
        ExprPtr e = ParseExpr();
        if (peek().kind != Tok::kRParen) Fail("expected ')'");
        next();
        return e;
      }
      default:
        Fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string>& vars_;
};

int Precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node)) {
    switch (b->op) {
      case BinaryOp::kAdd:
      case BinaryOp::kSub: return 1;
      case BinaryOp::kMul:
      case BinaryOp::kDiv: return 2;
      case BinaryOp::kPow: return 4;
    }
  }
  if (std::holds_alternative<Negate>(e.node)) return 3;
  return 5;
}

std::string Wrap(const Expr& e, bool parens) {
  return parens ? "(" + PrintExpr(e) + ")" : PrintExpr(e);
}

double Eval(const Expr& e, const std::map<std::string, double>& b) {
  auto domain = [&](const std::string& why) -> double {
    throw Error(ErrorCode::kDomainError, why + " in '" + PrintExpr(e) + "'");
  };
  double v = 0.0;
  if (const auto* c = std::get_if<Constant>(&e.node)) {
    v = c->value;
  } else if (const auto* var = std::get_if<Variable>(&e.node)) {
    auto it = b.find(var->name);
    if (it == b.end()) throw Error(ErrorCode::kMissingVariable, "missing variable '" + var->name + "'");
    v = it->second;
    if (!std::isfinite(v)) domain("non-finite value bound to '" + var->name + "'");
  } else if (const auto* neg = std::get_if<Negate>(&e.node)) {
    v = -Eval(*neg->operand, b);
  } else {
    const auto& bin = std::get<Binary>(e.node);
    const double l = Eval(*bin.lhs, b);
    const double r = Eval(*bin.rhs, b);
    switch (bin.op) {
      case BinaryOp::kAdd: v = l + r; break;
      case BinaryOp::kSub: v = l - r; break;
      case BinaryOp::kMul: v = l * r; break;
      case BinaryOp::kDiv:
        if (r == 0.0) domain("division by zero");
        v = l / r;
        break;
      case BinaryOp::kPow:
        if (l < 0.0 && r != std::trunc(r)) domain("fractional power of negative base");
        if (l == 0.0 && r < 0.0) domain("negative power of zero");
        v = std::pow(l, r);
        break;
    }
  }
  if (!std::isfinite(v)) domain("non-finite result");
  return v;
}

}  // namespace

bool ExprEqual(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* c = std::get_if<Constant>(&a.node)) {
    return c->value == std::get<Constant>(b.node).value;
  }
  if (const auto* v = std::get_if<Variable>(&a.node)) {
    return v->name == std::get<Variable>(b.node).name;
  }
  if (const auto* n = std::get_if<Negate>(&a.node)) {
    return ExprEqual(*n->operand, *std::get<Negate>(b.node).operand);
  }
  const auto& x = std::get<Binary>(a.node);
  const auto& y = std::get<Binary>(b.node);
  return x.op == y.op && ExprEqual(*x.lhs, *y.lhs) && ExprEqual(*x.rhs, *y.rhs);
}

std::string PrintExpr(const Expr& e) {
  if (const auto* c = std::get_if<Constant>(&e.node)) return FormatDouble(c->value);
  if (const auto* v = std::get_if<Variable>(&e.node)) return v->name;
  if (const auto* n = std::get_if<Negate>(&e.node)) {
    return "-" + Wrap(*n->operand, Precedence(*n->operand) < 3);
  }
  const auto& bin = std::get<Binary>(e.node);
  const int pl = Precedence(*bin.lhs);
  const int pr = Precedence(*bin.rhs);
  switch (bin.op) {
    case BinaryOp::kAdd: return Wrap(*bin.lhs, pl < 1) + " + " + Wrap(*bin.rhs, pr <= 1);
    case BinaryOp::kSub: return Wrap(*bin.lhs, pl < 1) + " - " + Wrap(*bin.rhs, pr <= 1);
    case BinaryOp::kMul: return Wrap(*bin.lhs, pl < 2) + " * " + Wrap(*bin.rhs, pr <= 2);
    case BinaryOp::kDiv: return Wrap(*bin.lhs, pl < 2) + " / " + Wrap(*bin.rhs, pr <= 2);
    case BinaryOp::kPow: return Wrap(*bin.lhs, pl < 5) + "^" + Wrap(*bin.rhs, pr < 3);
  }
  return "";
}

Formula Formula::Parse(std::string_view source) {
  if (Trim(source).empty()) {
    throw FormulaSyntaxError(ErrorCode::kSyntaxError, 0, "empty formula");
  }
  Formula f;
  f.source_ = std::string(source);
  Parser parser(Tokenize(source), f.variables_);
  f.root_ = parser.ParseAll();
  return f;
}

double Formula::Evaluate(const std::map<std::string, double>& bindings) const {
  for (const std::string& v : variables_) {
    if (!bindings.count(v)) throw Error(ErrorCode::kMissingVariable, "missing variable '" + v + "'");
  }
  return Eval(*root_, bindings);
}

std::string Formula::ToString() const { return PrintExpr(*root_); }

}  // namespace dbp
