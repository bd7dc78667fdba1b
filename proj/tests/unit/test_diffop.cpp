#include "doctest.h"
#include "dlambda/diffop.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/text.hpp"
#include "support.hpp"

using namespace dlambda;

namespace {

ChartPtr plane() { return Chart::make("plane", VarTable::make({"x", "y"}, {"k"})); }

DiffOp random_op(std::mt19937_64& rng, const ChartPtr& c, unsigned order) {
  DiffOp a(c);
  for (unsigned i = 0; i <= order; ++i)
    for (unsigned j = 0; i + j <= order; ++j) {
      Monomial idx;
      idx.set(0, i);
      idx.set(1, j);
      a.add_term(idx, RatFunc(testsupport::random_poly(rng, c->vars, 2, 3, 2)));
    }
  return a;
}

}  // namespace

TEST_CASE("canonical commutation") {
  auto c = plane();
  DiffOp dx = DiffOp::partial(c, "x");
  DiffOp x = DiffOp::scalar(c, RatFunc::variable(c->vars, "x"));
  CHECK(op_compose(dx, x).equals(parse_diffop("x * d/dx + 1", c)));
  CHECK(commutator(dx, x).equals(DiffOp::scalar(c, RatFunc::constant(c->vars, 1))));
}

TEST_CASE("constant coefficient partials commute") {
  auto c = Chart::make("cell", VarTable::make({"a1", "a2"}));
  DiffOp d1 = DiffOp::partial(c, "a1"), d2 = DiffOp::partial(c, "a2");
  CHECK(op_compose(d1, d2).equals(op_compose(d2, d1)));
  RatFunc f = parse_ratfunc("a1^3*a2^2", c->vars);
  CHECK(op_apply(op_compose(d1, d2), f) == parse_ratfunc("6*a1^2*a2", c->vars));
}

TEST_CASE("Euler operator on powers") {
  auto c = plane();
  DiffOp e = parse_diffop("x * d/dx", c);
  for (int k = 0; k <= 5; ++k) {
    RatFunc xk = RatFunc::variable(c->vars, "x").pow(k);
    CHECK(op_apply(e, xk) == xk * Rational(k));
  }
}

TEST_CASE("composition agrees with sequential application") {
  std::mt19937_64 rng(31);
  auto c = plane();
  for (int trial = 0; trial < 10; ++trial) {
    DiffOp a = random_op(rng, c, 2), b = random_op(rng, c, 2);
    DiffOp ab = op_compose(a, b);
    for (unsigned i = 0; i <= 3; ++i)
      for (unsigned j = 0; i + j <= 3; ++j) {
        RatFunc f = RatFunc(Poly::monomial(c->vars, [&] {
          Monomial m;
          m.set(0, i);
          m.set(1, j);
          return m;
        }()));
        CHECK(op_apply(ab, f) == op_apply(a, op_apply(b, f)));
      }
  }
}

TEST_CASE("composition with rational coefficients") {
  std::mt19937_64 rng(37);
  auto c = plane();
  DiffOp a = parse_diffop("1/(x + y) * d/dx + y/x * d/dy^2", c);
  DiffOp b = parse_diffop("x^2/(x - y) * d/dy + 1/y", c);
  RatFunc f = parse_ratfunc("x^3*y/(1 + x*y)", c->vars);
  CHECK(op_apply(op_compose(a, b), f) == op_apply(a, op_apply(b, f)));
}

TEST_CASE("composition is associative") {
  std::mt19937_64 rng(41);
  auto c = plane();
  for (int trial = 0; trial < 6; ++trial) {
    DiffOp a = random_op(rng, c, 2), b = random_op(rng, c, 2), d = random_op(rng, c, 2);
    CHECK(op_compose(op_compose(a, b), d).equals(op_compose(a, op_compose(b, d))));
  }
}

TEST_CASE("operators on different charts do not mix") {
  auto a = plane();
  auto b = Chart::make("other", VarTable::make({"u", "v"}));
  CHECK_THROWS_AS(op_compose(DiffOp::partial(a, "x"), DiffOp::partial(b, "u")), ChartMismatch);
  CHECK_THROWS_AS(DiffOp::partial(a, "k"), NotACoordinate);
}

TEST_CASE("order is derived from the multi-indices") {
  auto c = plane();
  CHECK(parse_diffop("d/dx^2 d/dy + x", c).order() == 3);
  CHECK(DiffOp(c).order() == 0);
}
