#include <map>

#include "doctest.h"
#include "dlambda/errors.hpp"
#include "dlambda/poly.hpp"
#include "support.hpp"

using namespace dlambda;

namespace {

VarTablePtr xyz() { return VarTable::make({"x", "y", "z"}, {"m1"}); }

VarTablePtr gtable() { return VarTable::make({"g11", "g12", "g13", "g21", "g22", "g23", "g31", "g32", "g33"}); }

// Exponent vectors as plain int vectors, accumulated by a double loop.
std::map<std::vector<int>, Rational> convolution(const Poly& p, const Poly& q, std::size_t n) {
  std::map<std::vector<int>, Rational> out;
  for (const auto& [ma, ca] : p.terms())
    for (const auto& [mb, cb] : q.terms()) {
      std::vector<int> e(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = int(ma[i]) + int(mb[i]);
      out[e] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::map<std::vector<int>, Rational> as_map(const Poly& p, std::size_t n) {
  std::map<std::vector<int>, Rational> out;
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = m[i];
    out[e] = c;
  }
  return out;
}

}  // namespace

TEST_CASE("additive inverse cancels") {
  auto v = xyz();
  Poly x = Poly::variable(v, "x");
  CHECK(poly_arith(PolyOp::Add, x, poly_arith(PolyOp::Neg, x, x)).is_zero());
}

TEST_CASE("multiplying a minor by one") {
  auto g = gtable();
  Poly d11 = Poly::variable(g, "g22") * Poly::variable(g, "g33") - Poly::variable(g, "g23") * Poly::variable(g, "g32");
  CHECK(poly_arith(PolyOp::Mul, d11, Poly::constant(g, 1)) == d11);
}

TEST_CASE("product agrees with the naive convolution") {
  std::mt19937_64 rng(11);
  auto v = xyz();
  for (int trial = 0; trial < 40; ++trial) {
    Poly p = testsupport::random_poly(rng, v, 3, 8, 3);
    Poly q = testsupport::random_poly(rng, v, 3, 8, 3);
    CHECK(as_map(p * q, 4) == convolution(p, q, 4));
  }
}

TEST_CASE("large products take the hashed path and still agree") {
  std::mt19937_64 rng(5);
  auto v = xyz();
  Poly p = testsupport::random_poly(rng, v, 3, 90, 6);
  Poly q = testsupport::random_poly(rng, v, 3, 90, 6);
  CHECK(as_map(p * q, 4) == convolution(p, q, 4));
}

TEST_CASE("ring axioms on random samples") {
  std::mt19937_64 rng(7);
  auto v = xyz();
  for (int trial = 0; trial < 30; ++trial) {
    Poly a = testsupport::random_poly(rng, v, 4, 5, 3);
    Poly b = testsupport::random_poly(rng, v, 4, 5, 3);
    Poly c = testsupport::random_poly(rng, v, 4, 5, 3);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("no zero coefficients are stored") {
  auto v = xyz();
  Poly x = Poly::variable(v, "x"), y = Poly::variable(v, "y");
  Poly p = (x + y) * (x - y) + y * y;
  REQUIRE(p.size() == 1);
  CHECK(p == x * x);
  for (const auto& t : p.terms()) CHECK(sgn(t.second) != 0);
}

TEST_CASE("exact division returns the cofactor or nothing") {
  std::mt19937_64 rng(3);
  auto v = xyz();
  for (int trial = 0; trial < 30; ++trial) {
    Poly a = testsupport::random_poly(rng, v, 3, 6, 3);
    Poly b = testsupport::random_nonzero_poly(rng, v, 3, 4, 2);
    auto q = (a * b).divide_exact(b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
  }
  Poly x = Poly::variable(v, "x"), y = Poly::variable(v, "y");
  CHECK_FALSE((x * x + y).divide_exact(x + y).has_value());
  CHECK_THROWS_AS(x.divide_exact(Poly(v)), DivisionByZero);
}

TEST_CASE("derivative of a monomial") {
  auto v = xyz();
  Poly x = Poly::variable(v, "x"), y = Poly::variable(v, "y");
  Poly p = x.pow(3) * y + x * Rational(5);
  CHECK(p.derivative(0) == x.pow(2) * y * Rational(3) + Poly::constant(v, 5));
  CHECK(p.derivative(2).is_zero());
}

TEST_CASE("evaluation by index") {
  auto v = xyz();
  Poly p = Poly::variable(v, "x") * Poly::variable(v, "y") + Poly::constant(v, Rational(1, 2));
  std::vector<Rational> pt{2, 3, 0, 0};
  CHECK(p.evaluate(pt) == Rational(13, 2));
  Poly q = p.partial_evaluate({{0, Rational(2)}});
  CHECK(q == Poly::variable(v, "y") * Rational(2) + Poly::constant(v, Rational(1, 2)));
}

TEST_CASE("mismatched tables and overflowing exponents are rejected") {
  auto a = xyz();
  auto b = VarTable::make({"x", "w"});
  CHECK_THROWS_AS(Poly::variable(a, "x") + Poly::variable(b, "x"), VarTableMismatch);
  Poly x = Poly::variable(a, "x");
  CHECK_THROWS_AS(x.pow(300), ExponentOverflow);
  CHECK_THROWS_AS(Poly::variable(a, "q"), UnknownVariable);
}

TEST_CASE("tables reject duplicate names") {
  CHECK_THROWS(VarTable::make({"x", "x"}));
  CHECK_THROWS(VarTable::make({"x"}, {"x"}));
}

TEST_CASE("rebase moves a polynomial to a wider table") {
  auto a = VarTable::make({"x", "y"});
  auto b = VarTable::make({"y", "w", "x"});
  Poly p = Poly::variable(a, "x") * Poly::variable(a, "y").pow(2);
  Poly q = rebase(p, b);
  CHECK(q == Poly::variable(b, "x") * Poly::variable(b, "y").pow(2));
}
