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

#include <cmath>
#include <functional>
#include <random>

#include "dbp/error.hpp"
#include "dbp/formula.hpp"
#include "doctest.h"

using namespace dbp;

namespace {

double Eval(const char* src, const std::map<std::string, double>& b = {}) {
  return Formula::Parse(src).Evaluate(b);
}

template <typename E>
E Raises(const std::function<void()>& f) {
  try {
    f();
  } catch (const E& e) {
    return e;
  }
  FAIL("no exception");
  throw;
}

}  // namespace

TEST_CASE("unit variables expose the coefficient") {
  CHECK(Eval("0.04121 * TOC^1.098 * Cl2^0.152", {{"TOC", 1.0}, {"Cl2", 1.0}}) == 0.04121);
}

TEST_CASE("power is right-associative and binds tighter than unary minus") {
  CHECK(Eval("2^3^2") == 512.0);
  CHECK(Eval("-2^2") == -4.0);
  CHECK(Eval("2^-1") == 0.5);
  CHECK(Eval("(-2)^2") == 4.0);
  CHECK(Eval("--3") == 3.0);
}

TEST_CASE("arithmetic precedence and associativity") {
  CHECK(Eval("1 + 2 * 3") == 7.0);
  CHECK(Eval("(1 + 2) * 3") == 9.0);
  CHECK(Eval("10 - 4 - 3") == 3.0);
  CHECK(Eval("64 / 4 / 2") == 8.0);
  CHECK(Eval("2 * 3 ^ 2") == 18.0);
  CHECK(Eval("(a+b)/2", {{"a", 10.0}, {"b", 20.0}}) == 15.0);
  CHECK(Eval("42", {{"x", 1.0}}) == 42.0);
}

TEST_CASE("scientific notation literals") {
  CHECK(Eval("1.5e3") == 1500.0);
  CHECK(Eval("2E-2") == 0.02);
  CHECK(Eval(".5 + 5.") == 5.5);
  CHECK(Eval("10^-1.065") == doctest::Approx(std::pow(10.0, -1.065)).epsilon(1e-15));
}

TEST_CASE("variables are collected case-sensitively") {
  const Formula f = Formula::Parse("TOC * toc + Cl2_x - TOC");
  CHECK(f.variables() == std::set<std::string>{"Cl2_x", "TOC", "toc"});
}

TEST_CASE("syntax errors carry the offset") {
  auto e = Raises<FormulaSyntaxError>([] { Formula::Parse("TOC^^2"); });
  CHECK(e.code() == ErrorCode::kSyntaxError);
  CHECK(e.offset() == 4);

  e = Raises<FormulaSyntaxError>([] { Formula::Parse("1 + $"); });
  CHECK(e.code() == ErrorCode::kUnknownCharacter);
  CHECK(e.offset() == 4);

  e = Raises<FormulaSyntaxError>([] { Formula::Parse("(1 + 2"); });
  CHECK(e.code() == ErrorCode::kSyntaxError);
  CHECK(e.offset() == 6);

  e = Raises<FormulaSyntaxError>([] { Formula::Parse("1 2"); });
  CHECK(e.offset() == 2);

  e = Raises<FormulaSyntaxError>([] { Formula::Parse(""); });
  CHECK(e.code() == ErrorCode::kSyntaxError);
  CHECK(e.offset() == 0);
}

TEST_CASE("evaluation errors are typed, never NaN") {
  auto missing = Raises<Error>([] { Eval("a + b", {{"a", 1.0}}); });
  CHECK(missing.code() == ErrorCode::kMissingVariable);
  CHECK(std::string(missing.what()).find("b") != std::string::npos);

  auto div = Raises<Error>([] { Eval("1 / (x - 1)", {{"x", 1.0}}); });
  CHECK(div.code() == ErrorCode::kDomainError);
  CHECK(std::string(div.what()).find("x - 1") != std::string::npos);

  auto frac = Raises<Error>([] { Eval("x ^ 0.5", {{"x", -4.0}}); });
  CHECK(frac.code() == ErrorCode::kDomainError);

  auto overflow = Raises<Error>([] { Eval("10 ^ 400"); });
  CHECK(overflow.code() == ErrorCode::kDomainError);

  // Integral powers of negative bases are fine.
  CHECK(Eval("x ^ 3", {{"x", -2.0}}) == -8.0);
}

TEST_CASE("printing then parsing is a fixed point") {
  const char* sources[] = {
      "0.04121 * TOC^1.098 * Cl2^0.152 * BR^0.068 * Temp^0.609 * pH^1.601 * time^0.263",
      "-345 + 1.695*Temperature + 93.1*pH - 0.0693*Temperature^2",
      "2^3^2", "(2^3)^2", "-2^2", "(-2)^2", "a - (b - c)", "a - b - c", "a / (b / c)",
      "a / b / c", "-(a + b) * c", "10^-1.065 * (Cl2/DOC)^0.52", "--x", "1e-7 * x",
      "2^-x^2", "(a*b)^c", "a^(b*c)", "-a^-b"};
  for (const char* src : sources) {
    CAPTURE(src);
    const Formula f = Formula::Parse(src);
    const Formula g = Formula::Parse(f.ToString());
    CHECK(ExprEqual(f.ast(), g.ast()));
    CHECK(g.ToString() == f.ToString());
  }
}

TEST_CASE("printed form keeps values") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  const char* sources[] = {"a - (b - c)", "a / (b / c) ^ 2", "-(a + b) * c", "a ^ b ^ c"};
  for (const char* src : sources) {
    const Formula f = Formula::Parse(src);
    const Formula g = Formula::Parse(f.ToString());
    for (int i = 0; i < 50; ++i) {
      const std::map<std::string, double> b{{"a", u(gen)}, {"b", u(gen)}, {"c", u(gen)}};
      CHECK(f.Evaluate(b) == g.Evaluate(b));
    }
  }
}
