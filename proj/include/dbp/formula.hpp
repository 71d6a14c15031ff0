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

#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace dbp {

// Expression tree for operator-supplied formulas:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?        (right-associative)
//   primary := number | identifier | '(' expr ')'
// Power binds tighter than unary minus, so -2^2 == -4 and 2^-1 == 0.5.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Constant {
  double value;
};
struct Variable {
  std::string name;
};
struct Negate {
  ExprPtr operand;
};
enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<Constant, Variable, Negate, Binary> node;
};

bool ExprEqual(const Expr& a, const Expr& b);

class Formula {
 public:
  // Throws FormulaSyntaxError (kSyntaxError / kUnknownCharacter).
  static Formula Parse(std::string_view source);

  const std::string& source() const { return source_; }
  const Expr& ast() const { return *root_; }
  const std::set<std::string>& variables() const { return variables_; }

  // Throws Error kMissingVariable or kDomainError; never returns NaN/inf.
  double Evaluate(const std::map<std::string, double>& bindings) const;

  // Minimal-parenthesis rendering that parses back to an equal tree.
  std::string ToString() const;

 private:
  std::string source_;
  ExprPtr root_;
  std::set<std::string> variables_;
};

std::string PrintExpr(const Expr& e);

}  // namespace dbp
