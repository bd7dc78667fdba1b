#include "doctest.h"
#include "dlambda/errors.hpp"
#include "dlambda/text.hpp"
#include "support.hpp"

using namespace dlambda;

namespace {

VarTablePtr table() { return VarTable::make({"g11", "g33", "U12", "x", "y"}, {"m1", "m2"}); }

}  // namespace

TEST_CASE("canonical polynomial text") {
  auto v = table();
  Poly p = parse_poly("(3/2)*g11^2*g33 - U12", v);
  CHECK(format_poly(p) == "(3/2)*g11^2*g33 - U12");
  CHECK(format_poly(parse_poly("-U12 + 3/2*g33*g11*g11", v)) == "(3/2)*g11^2*g33 - U12");
  CHECK(format_poly(parse_poly("-(1/3)*x + 4", v)) == "-(1/3)*x + 4");
  CHECK(format_poly(Poly(v)) == "0");
  CHECK(format_poly(parse_poly("(x + y)^2 - x^2 - y^2", v)) == "2*x*y");
}

TEST_CASE("printing then parsing is the identity") {
  std::mt19937_64 rng(21);
  auto v = table();
  for (int trial = 0; trial < 50; ++trial) {
    Poly p = testsupport::random_poly(rng, v, 7, 6, 4);
    std::string s = format_poly(p);
    CHECK(parse_poly(s, v) == p);
    CHECK(format_poly(parse_poly(s, v)) == s);
    Poly q = testsupport::random_nonzero_poly(rng, v, 5, 3, 2);
    RatFunc f(p, q);
    std::string t = format_ratfunc(f);
    CHECK(parse_ratfunc(t, v) == f);
    CHECK(format_ratfunc(parse_ratfunc(t, v)) == t);
  }
}

TEST_CASE("operator text is bit-stable") {
  auto v = table();
  auto chart = Chart::make("test", v);
  DiffOp a = parse_diffop("-g33 * d/dg11 + (3/2) * d/dx^2 d/dy + U12*x - d/dU12", chart);
  std::string s = format_diffop(a);
  CHECK(s == "(3/2) * d/dx^2 d/dy - g33 * d/dg11 - d/dU12 + U12*x");
  CHECK(format_diffop(parse_diffop(s, chart)) == s);
  CHECK(parse_diffop(s, chart).equals(a));
}

TEST_CASE("operator expressions are normal-ordered on parse") {
  auto v = table();
  auto chart = Chart::make("test", v);
  DiffOp a = parse_diffop("d/dx * x", chart);
  CHECK(format_diffop(a) == "x * d/dx + 1");
  CHECK(format_diffop(parse_diffop("(g11 + g33) * d/dg11 - 1/g33", chart)) == "(g11 + g33) * d/dg11 - (1)/(g33)");
}

TEST_CASE("parse errors carry positions") {
  auto v = table();
  try {
    parse_poly("g11 + * x", v);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
  CHECK_THROWS_AS(parse_poly("g11 + q", v), ParseError);
  CHECK_THROWS_AS(parse_poly("1/x", v), ParseError);
  CHECK_THROWS_AS(parse_ratfunc("d/dx", v), ParseError);
  CHECK_THROWS_AS(parse_ratfunc("(x", v), ParseError);
  auto chart = Chart::make("test", v);
  CHECK_THROWS_AS(parse_diffop("d/dm1", chart), ParseError);
  CHECK_THROWS_AS(parse_diffop("x / d/dx", chart), ParseError);
}
