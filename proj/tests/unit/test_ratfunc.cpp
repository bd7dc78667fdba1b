#include <algorithm>
#include <array>

#include "doctest.h"
#include "dlambda/errors.hpp"
#include "dlambda/ratfunc.hpp"
#include "dlambda/text.hpp"
#include "support.hpp"

using namespace dlambda;

namespace {

VarTablePtr gtable() {
  return VarTable::make({"g11", "g12", "g13", "g21", "g22", "g23", "g31", "g32", "g33"}, {"l1", "l2"});
}

Poly g(const VarTablePtr& v, int i, int j) { return Poly::variable(v, "g" + std::to_string(i) + std::to_string(j)); }

// det(g) by the permutation expansion.
Poly det_by_permutations(const VarTablePtr& v) {
  std::array<int, 3> p{0, 1, 2};
  Poly out(v);
  do {
    int inv = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (p[a] > p[b]) ++inv;
    Poly t = g(v, 1, p[0] + 1) * g(v, 2, p[1] + 1) * g(v, 3, p[2] + 1);
    out += inv % 2 ? -t : t;
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

VarTablePtr xyw() { return VarTable::make({"x", "y", "w"}, {"m"}); }

}  // namespace

TEST_CASE("dividing the minor by g33 squared gives the alpha2 expression") {
  auto v = gtable();
  Poly d11 = g(v, 2, 2) * g(v, 3, 3) - g(v, 2, 3) * g(v, 3, 2);
  RatFunc a2 = rf_arith(RatOp::Div, RatFunc(d11), RatFunc(g(v, 3, 3).pow(2)));
  CHECK(a2 == parse_ratfunc("(g22*g33 - g23*g32)/g33^2", v));
  CHECK(format_ratfunc(a2) == "(g22*g33 - g23*g32)/(g33^2)");
}

TEST_CASE("f plus minus f is zero") {
  auto v = xyw();
  RatFunc f = parse_ratfunc("(x^2 + y)/(x - w)", v);
  CHECK(rf_arith(RatOp::Add, f, rf_arith(RatOp::Neg, f, f)).is_zero());
}

TEST_CASE("p/q times q/p is one") {
  std::mt19937_64 rng(1);
  auto v = xyw();
  for (int trial = 0; trial < 25; ++trial) {
    Poly p = testsupport::random_nonzero_poly(rng, v, 3, 4, 3);
    Poly q = testsupport::random_nonzero_poly(rng, v, 3, 4, 3);
    RatFunc r = RatFunc(p, q) * RatFunc(q, p);
    CHECK(r.equals(RatFunc::constant(v, 1)));
  }
}

TEST_CASE("differentiation of minors and fractions") {
  auto v = gtable();
  Poly d11 = g(v, 2, 2) * g(v, 3, 3) - g(v, 2, 3) * g(v, 3, 2);
  CHECK(differentiate(RatFunc(d11), "g11").is_zero());
  // Oracle: expand the determinant by permutations and differentiate each monomial.
  Poly det = det_by_permutations(v);
  std::vector<Poly::Term> manual;
  for (const auto& [m, c] : det.terms()) {
    if (!m[0]) continue;
    Monomial r = m;
    r.set(0, m[0] - 1);
    manual.emplace_back(r, c * m[0]);
  }
  CHECK(differentiate(RatFunc(det), "g11") == RatFunc(Poly::from_terms(v, manual)));
  CHECK(differentiate(RatFunc(det), "g11") == RatFunc(d11));

  auto w = xyw();
  RatFunc f = parse_ratfunc("x^2/y", w);
  CHECK(differentiate(f, "x") == parse_ratfunc("2*x/y", w));
  CHECK_THROWS_AS(differentiate(f, "m"), NotACoordinate);
  CHECK_THROWS_AS(differentiate(f, "q"), UnknownVariable);
}

TEST_CASE("Leibniz rule on random products") {
  std::mt19937_64 rng(2);
  auto v = xyw();
  for (int trial = 0; trial < 20; ++trial) {
    RatFunc f(testsupport::random_poly(rng, v, 3, 4, 3), testsupport::random_nonzero_poly(rng, v, 3, 3, 2));
    RatFunc h(testsupport::random_poly(rng, v, 3, 4, 3), testsupport::random_nonzero_poly(rng, v, 3, 3, 2));
    for (const char* x : {"x", "y"})
      CHECK(differentiate(f * h, x) == differentiate(f, x) * h + f * differentiate(h, x));
  }
}

TEST_CASE("equality is an equivalence invariant under rescaling") {
  std::mt19937_64 rng(4);
  auto v = xyw();
  for (int trial = 0; trial < 20; ++trial) {
    Poly n = testsupport::random_poly(rng, v, 3, 4, 3);
    Poly d = testsupport::random_nonzero_poly(rng, v, 3, 3, 2);
    Poly s = testsupport::random_nonzero_poly(rng, v, 3, 3, 2);
    Poly t = testsupport::random_nonzero_poly(rng, v, 3, 2, 2);
    RatFunc a(n, d), b(n * s, d * s), c(n * s * t, d * t * s);
    CHECK(a == a);
    CHECK(a == b);
    CHECK(b == a);
    CHECK(b == c);
    CHECK(a == c);
  }
}

TEST_CASE("identity and constant substitutions") {
  auto v = gtable();
  RatFunc a1 = parse_ratfunc(
      "g33*(g11*g22*g33 - g11*g23*g32 - g12*g21*g33 + g12*g23*g31 + g13*g21*g32 - g13*g22*g31)/(g22*g33 - g23*g32)^2",
      v);
  CHECK(substitute(a1, Substitution::identity(v)) == a1);
  auto pt = VarTable::make({"x"}, {"l1", "l2"});
  std::map<std::string, RatFunc> ident;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      ident["g" + std::to_string(i) + std::to_string(j)] = RatFunc::constant(pt, i == j ? 1 : 0);
  CHECK(substitute(a1, Substitution::make(v, pt, ident)) == RatFunc::constant(pt, 1));
  std::map<std::string, Rational> id_point;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) id_point["g" + std::to_string(i) + std::to_string(j)] = i == j ? 1 : 0;
  CHECK(evaluate(RatFunc(det_by_permutations(v)), id_point) == 1);
  CHECK(evaluate(a1, id_point) == 1);
}

TEST_CASE("substituting onto a zero denominator fails") {
  auto v = xyw();
  RatFunc f = parse_ratfunc("1/(x - y)", v);
  auto s = Substitution::make(v, v, {{"x", RatFunc::variable(v, "y")}});
  CHECK_THROWS_AS(substitute(f, s), DivisionByZero);
}

TEST_CASE("evaluation agrees with evaluating numerator and denominator") {
  std::mt19937_64 rng(9);
  auto v = xyw();
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Poly n = testsupport::random_poly(rng, v, 4, 4, 3);
    Poly d = testsupport::random_nonzero_poly(rng, v, 4, 3, 2);
    RatFunc f(n, d);
    auto pt = testsupport::random_point(rng, 4);
    Rational dv = d.evaluate(pt);
    if (sgn(dv) == 0) {
      CHECK_THROWS_AS(f.evaluate(pt), DivisionByZero);
      continue;
    }
    CHECK(f.evaluate(pt) == n.evaluate(pt) / dv);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("substitution is functorial") {
  std::mt19937_64 rng(12);
  auto v = xyw();
  for (int trial = 0; trial < 10; ++trial) {
    RatFunc f(testsupport::random_poly(rng, v, 3, 4, 2), testsupport::random_nonzero_poly(rng, v, 3, 2, 2));
    std::map<std::string, RatFunc> m1, m2;
    for (const char* x : {"x", "y", "w"}) {
      m1[x] = RatFunc(testsupport::random_poly(rng, v, 3, 3, 2));
      m2[x] = RatFunc(testsupport::random_poly(rng, v, 3, 3, 2));
    }
    auto s1 = Substitution::make(v, v, m1);
    auto s2 = Substitution::make(v, v, m2);
    std::map<std::string, RatFunc> composed;
    for (const auto& [k, img] : m1) composed[k] = substitute(img, s2);
    auto s21 = Substitution::make(v, v, composed);
    try {
      CHECK(substitute(substitute(f, s1), s2) == substitute(f, s21));
    } catch (const DivisionByZero&) {
      // A random map can send the denominator to zero; both sides then fail.
      CHECK_THROWS_AS(substitute(f, s21), DivisionByZero);
    }
  }
}

TEST_CASE("denominators keep their factors") {
  auto v = xyw();
  RatFunc a = parse_ratfunc("1/(x + y)^2", v);
  RatFunc b = parse_ratfunc("1/((x + y)*y)", v);
  RatFunc s = a + b;
  CHECK(s == parse_ratfunc("(y + x + y)/((x + y)^2*y)", v));
  RatFunc c = parse_ratfunc("(x^2 + 2*x*y + y^2)/(x + y)", v);
  REQUIRE(c.as_poly().has_value());
  CHECK(*c.as_poly() == parse_poly("x + y", v));
  CHECK_THROWS_AS(RatFunc(parse_poly("x", v), Poly(v)), DivisionByZero);
  CHECK_THROWS_AS(a / RatFunc(Poly(v)), DivisionByZero);
}

TEST_CASE("parameters behave as ordinary variables in arithmetic") {
  auto v = xyw();
  RatFunc f = parse_ratfunc("m*x/(m + 1)", v);
  CHECK(differentiate(f, "x") == parse_ratfunc("m/(m + 1)", v));
  CHECK(f.partial_evaluate({{3, Rational(1)}}) == parse_ratfunc("x/2", v));
}
