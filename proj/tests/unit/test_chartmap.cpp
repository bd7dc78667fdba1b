#include "doctest.h"
#include "dlambda/chartmap.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/text.hpp"
#include "support.hpp"

using namespace dlambda;

namespace {

// (x, y) on the source, (u, v) on the target with x = u, y = u*v.
struct Blowup {
  ChartPtr src = Chart::make("xy", VarTable::make({"x", "y"}, {"k"}));
  ChartPtr dst = Chart::make("uv", VarTable::make({"u", "v"}, {"k"}));
  ChartMap map = ChartMap::make(src, dst,
                                {{"x", parse_ratfunc("u", dst->vars)}, {"y", parse_ratfunc("u*v", dst->vars)}},
                                {{"u", parse_ratfunc("x", src->vars)}, {"v", parse_ratfunc("y/x", src->vars)}});
};

}  // namespace

TEST_CASE("transport along the identity map") {
  auto c = Chart::make("xy", VarTable::make({"x", "y"}));
  auto id = ChartMap::make(c, c, {{"x", RatFunc::variable(c->vars, "x")}, {"y", RatFunc::variable(c->vars, "y")}},
                           {{"x", RatFunc::variable(c->vars, "x")}, {"y", RatFunc::variable(c->vars, "y")}});
  DiffOp a = parse_diffop("x*y * d/dx^2 + 1/(x + y) * d/dy", c);
  CHECK(transport(a, id).equals(a));
}

TEST_CASE("transport satisfies its defining identity") {
  Blowup b;
  REQUIRE(b.map.roundtrip());
  DiffOp a = parse_diffop("x * d/dx d/dy + y^2 * d/dy + k * d/dx", b.src);
  DiffOp t = transport(a, b.map);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    RatFunc f(testsupport::random_poly(rng, b.dst->vars, 2, 4, 3),
              testsupport::random_nonzero_poly(rng, b.dst->vars, 2, 2, 2));
    RatFunc lhs = op_apply(t, f);
    RatFunc rhs = substitute(op_apply(a, substitute(f, b.map.inverse())), b.map.forward());
    CHECK(lhs == rhs);
  }
}

TEST_CASE("transport respects composition and reverses") {
  Blowup b;
  DiffOp a = parse_diffop("y * d/dx + x^2 * d/dy", b.src);
  DiffOp c = parse_diffop("d/dx d/dy + x", b.src);
  CHECK(transport(op_compose(a, c), b.map).equals(op_compose(transport(a, b.map), transport(c, b.map))));
  ChartMap back = b.map.reversed();
  CHECK(transport(transport(a, b.map), back).equals(a));
}

TEST_CASE("a singular map is rejected") {
  Blowup b;
  CHECK_THROWS_AS(ChartMap::make(b.src, b.dst, {{"x", parse_ratfunc("u", b.dst->vars)}, {"y", parse_ratfunc("u", b.dst->vars)}},
                                 {{"u", parse_ratfunc("x", b.src->vars)}, {"v", parse_ratfunc("y", b.src->vars)}}),
                  SingularMap);
}

TEST_CASE("regularity against a unit set") {
  auto c = Chart::make("xy", VarTable::make({"x", "y"}));
  DiffOp a = parse_diffop("(x*y + y)/x * d/dx + (x^2 - y^2)/(x - y)", c);
  CHECK_FALSE(regular_on(a, *c).regular);
  auto with_x = c->with_units("xy[x]", {parse_poly("x", c->vars)});
  CHECK(regular_on(a, *with_x).regular);
  CHECK(regular_on(DiffOp(c), *c).regular);
  auto w = regular_on(a, *c);
  REQUIRE(w.witness.has_value());
  CHECK(*w.witness == parse_ratfunc("(x*y + y)/x", c->vars));
}

TEST_CASE("ad-nilpotency depths") {
  auto c = Chart::make("xy", VarTable::make({"x", "y"}));
  DiffOp dx = DiffOp::partial(c, "x");
  auto r = ad_nilpotency_depth(parse_diffop("x * d/dx", c), dx, 12);
  CHECK(r.found);
  CHECK(r.depth == 2);
  CHECK(ad_nilpotency_depth(dx, dx, 12).depth == 1);
  auto never = ad_nilpotency_depth(parse_diffop("d/dx", c), parse_diffop("x * d/dx", c), 5);
  CHECK_FALSE(never.found);
}

TEST_CASE("nilpotency depth is invariant under transport") {
  Blowup b;
  DiffOp a = parse_diffop("x^3 * d/dy^2", b.src);
  DiffOp v = parse_diffop("d/dx", b.src);
  auto before = ad_nilpotency_depth(a, v, 12);
  auto after = ad_nilpotency_depth(transport(a, b.map), transport(v, b.map), 12);
  REQUIRE(before.found);
  REQUIRE(after.found);
  CHECK(before.depth == after.depth);
}
