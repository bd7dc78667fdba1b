#include "doctest.h"
#include "dlambda/errors.hpp"
#include "dlambda/pgl3.hpp"
#include "dlambda/text.hpp"
#include "support.hpp"

using namespace dlambda;
using namespace dlambda::pgl3;

namespace {

const Model& model() { return Model::get(); }

DiffOp field(Gen g, Side s = Side::Left) { return infinitesimal_vector_field({g, s}); }

// Linear combination of fields read off a traceless matrix.
DiffOp field_of_matrix(const IntMatrix& m, Side s) {
  DiffOp r(model().matrix());
  for (const auto& [g, c] : decompose(m)) r = r + field(g, s) * c;
  return r;
}

AffineExpr cell_param(const char* n) { return model().param(model().cell(), n); }

std::map<std::string, Rational> identity_point() {
  std::map<std::string, Rational> p;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) p["g" + std::to_string(i) + std::to_string(j)] = i == j ? 1 : 0;
  return p;
}

}  // namespace

TEST_CASE("cdv forward formulas") {
  auto f = cdv_forward();
  const auto& v = model().matrix()->vars;
  CHECK(f.at("a2") == RatFunc(model().minor(1, 1), model().g(3, 3) * model().g(3, 3)));
  CHECK(f.at("a1") == RatFunc(model().g(3, 3) * model().det(), model().minor(1, 1) * model().minor(1, 1)));
  auto id = identity_point();
  for (const auto& [name, r] : f) CHECK(evaluate(r, id) == Rational(name == "a1" || name == "a2" ? 1 : 0));
  DiffOp e = euler_matrix();
  for (const auto& [name, r] : f) CHECK(op_apply(e, r).is_zero());
  CHECK(f.at("U12") == parse_ratfunc("(g12*g33 - g13*g32)/(g22*g33 - g23*g32)", v));
}

TEST_CASE("cdv backward formulas and roundtrip") {
  REQUIRE(model().cdv().roundtrip());
  auto b = cdv_backward();
  const auto& cv = model().cell()->vars;
  CHECK(b.at("g11") == parse_poly("a1*a2 + a2*U12*U21 + U13*U31", cv));
  CHECK(b.at("g22") == parse_poly("a2 + U23*U32", cv));
  CHECK(b.at("g32") == parse_poly("U32", cv));
  CHECK(b.at("g23") == parse_poly("U23", cv));
  std::map<std::string, Rational> p = {{"a1", 1}, {"a2", 1}};
  for (const char* u : {"U12", "U21", "U13", "U31", "U23", "U32"}) p[u] = 0;
  for (const auto& [name, q] : b) CHECK(evaluate(RatFunc(q), p) == Rational(name[1] == name[2] ? 1 : 0));
}

TEST_CASE("left fields on the matrix chart") {
  const auto& c = model().matrix();
  CHECK(field(Gen::X1).equals(parse_diffop("-g21 * d/dg11 - g22 * d/dg12 - g23 * d/dg13", c)));
  CHECK(field(Gen::Y1).equals(parse_diffop("-g11 * d/dg21 - g12 * d/dg22 - g13 * d/dg23", c)));
  CHECK(field(Gen::Y3).equals(parse_diffop("-g11 * d/dg31 - g12 * d/dg32 - g13 * d/dg33", c)));
  CHECK(field(Gen::H2).equals(parse_diffop(
      "-g21 * d/dg21 - g22 * d/dg22 - g23 * d/dg23 + g31 * d/dg31 + g32 * d/dg32 + g33 * d/dg33", c)));
  CHECK(op_apply(field(Gen::H1), RatFunc::constant(c->vars, 1)).is_zero());
}

TEST_CASE("bracket tables against matrix commutators") {
  for (Side s : {Side::Left, Side::Right}) {
    for (Gen a : kAllGens)
      for (Gen b : kAllGens) {
        DiffOp lhs = commutator(field(a, s), field(b, s));
        IntMatrix m = matrix_commutator(gen_matrix(a), gen_matrix(b));
        DiffOp rhs = field_of_matrix(m, s);
        CHECK_MESSAGE(lhs.equals(rhs), gen_name(a), " ", gen_name(b));
      }
  }
  for (Gen a : kAllGens)
    for (Gen b : kAllGens) CHECK(commutator(field(a, Side::Left), field(b, Side::Right)).is_zero());
}

TEST_CASE("big-cell forms") {
  const auto& c = model().cell();
  CHECK(vector_field_big_cell({Gen::X1, Side::Left}).equals(parse_diffop("-d/dU12 - U23 * d/dU13", c)));
  CHECK(vector_field_big_cell({Gen::X2, Side::Left}).equals(parse_diffop("-d/dU23", c)));
  CHECK(vector_field_big_cell({Gen::X3, Side::Left}).equals(parse_diffop("-d/dU13", c)));
  CHECK(vector_field_big_cell({Gen::Y1, Side::Left})
            .equals(parse_diffop("2*U12*a1 * d/da1 - U12*a2 * d/da2 - U13 * d/dU23 + U12^2 * d/dU12 - a1 * d/dU21", c)));
}

TEST_CASE("big-cell fields transport back to the matrix chart") {
  // Up to the scale t, which the cell form drops: compare on the cone.
  const Model& m = model();
  for (Gen g : kAllGens) {
    DiffOp on_cone = transport(field(g), m.cdv());
    DiffOp back = transport(on_cone, m.cdv().reversed());
    CHECK(back.equals(field(g)));
  }
}

TEST_CASE("d/da formulas on the matrix chart") {
  const auto& c = model().matrix();
  auto [p1, p2] = partial_alpha_ops();
  std::string d11 = "(" + minor_text(1, 1) + ")";
  CHECK(p1.equals(parse_diffop(d11 + "/g33 * d/dg11", c)));
  CHECK(p2.equals(parse_diffop("g33/" + d11 + " * ((" + minor_text(2, 2) + ") * d/dg11 + " + d11 + " * d/dg22 + (" +
                                   minor_text(2, 1) + ") * d/dg12 + (" + minor_text(1, 2) + ") * d/dg21)",
                               c)));
  auto f = cdv_forward();
  CHECK(op_apply(p1, f.at("a1")) == RatFunc::constant(c->vars, 1));
  CHECK(op_apply(p1, f.at("U13")).is_zero());
  CHECK(op_apply(p2, f.at("a2")) == RatFunc::constant(c->vars, 1));
  CHECK(op_apply(p2, f.at("a1")).is_zero());
}

TEST_CASE("D0 is polynomial on the matrix chart") {
  const Model& m = model();
  DiffOp d = d0_matrix();
  CHECK(regular_on(d, *m.matrix()).regular);
  std::string e = "d/dg11 * ((" + minor_text(2, 2) + ") * d/dg11 + (" + minor_text(1, 1) + ") * d/dg22 + (" +
                  minor_text(2, 1) + ") * d/dg12 + (" + minor_text(1, 2) + ") * d/dg21)";
  CHECK(d.equals(parse_diffop(e, m.matrix())));
  auto f = cdv_forward();
  CHECK(op_apply(d, f.at("a1") * f.at("a2")) == RatFunc::constant(m.matrix()->vars, 1));
  CHECK(op_apply(d0_cell(), parse_ratfunc("a1^3*a2^2", m.cell()->vars)) == parse_ratfunc("6*a1^2*a2", m.cell()->vars));
}

TEST_CASE("D0 is locally nilpotent under the nilpotent fields") {
  DiffOp d = d0_matrix();
  for (Side s : {Side::Left, Side::Right})
    for (Gen g : kNilpotentGens) {
      auto r = ad_nilpotency_depth(d, field(g, s), 12);
      CHECK_MESSAGE(r.found, generator_name({g, s}));
    }
}

TEST_CASE("sigma is a weight vector") {
  PowerSection s = sigma_cell(cell_param("m1"), cell_param("m2"));
  Weight nu = Weight::support_weight(model().cell()->vars);
  auto h1 = express_as_multiple(op_apply_section(phi_lambda({Gen::H1, Side::Left}), s), s);
  auto h2 = express_as_multiple(op_apply_section(phi_lambda({Gen::H2, Side::Left}), s), s);
  REQUIRE(h1.ok);
  REQUIRE(h2.ok);
  CHECK(h1.scalar == RatFunc(nu.nu1.poly()));
  CHECK(h2.scalar == RatFunc(nu.nu2.poly()));
  auto r1 = express_as_multiple(op_apply_section(phi_lambda({Gen::H1, Side::Right}), s), s);
  REQUIRE(r1.ok);
  CHECK(r1.scalar == RatFunc(-nu.nu1.poly()));
  for (Gen g : {Gen::X1, Gen::X2, Gen::X3})
    CHECK(op_apply_section(phi_lambda({g, Side::Left}), s).is_zero());
}

TEST_CASE("sigma on the matrix chart") {
  const Model& m = model();
  AffineExpr m1 = m.param(m.matrix(), "m1"), m2 = m.param(m.matrix(), "m2");
  PowerSection s = sigma_matrix(m1, m2);
  CHECK(s.exponent_of(m.g(3, 3)).poly() == parse_poly("l1 + m1 - 2*m2", m.matrix()->vars));
  PowerSection c = section_to_cell(s);
  auto r = express_as_multiple(c, sigma_cell(cell_param("m1"), cell_param("m2")));
  REQUIRE(r.ok);
  CHECK(r.scalar == RatFunc::constant(m.cell()->vars, 1));
  PowerSection zero = sigma_matrix(AffineExpr(m.matrix()->vars, 0), AffineExpr(m.matrix()->vars, 0));
  CHECK(express_as_multiple(zero, f_lambda_matrix()).ok);
}

TEST_CASE("twisted field corrections") {
  const auto& v = model().cell()->vars;
  CHECK(phi_lambda_correction({Gen::Y1, Side::Left}) == parse_ratfunc("-l2*U12", v));
  CHECK(phi_lambda_correction({Gen::Y2, Side::Left}) == parse_ratfunc("-l1*U23", v));
  CHECK(phi_lambda_correction({Gen::Y3, Side::Left}) == parse_ratfunc("-l1*U13 + l2*(U12*U23 - U13)", v));
  for (Gen g : {Gen::X1, Gen::X2, Gen::X3}) CHECK(phi_lambda_correction({g, Side::Left}).is_zero());
}

TEST_CASE("twisted bracket tables") {
  for (Gen a : kAllGens)
    for (Gen b : kAllGens) {
      DiffOp lhs = commutator(phi_lambda({a, Side::Left}), phi_lambda({b, Side::Left}));
      DiffOp rhs(model().cell());
      for (const auto& [g, c] : decompose(matrix_commutator(gen_matrix(a), gen_matrix(b))))
        rhs = rhs + phi_lambda({g, Side::Left}) * c;
      CHECK(lhs.equals(rhs));
      CHECK(commutator(phi_lambda({a, Side::Left}), phi_lambda({b, Side::Right})).is_zero());
    }
}

TEST_CASE("Casimir values and centrality") {
  const auto& v = model().cell()->vars;
  CHECK(chi(Weight::of(v, 0, 0)).is_zero());
  CHECK(chi(Weight::rho(v)) == RatFunc::constant(v, 1));
  CHECK(chi(Weight::of(v, 2, 0)) == RatFunc::constant(v, Rational(10, 9)));
  DiffOp c = casimir();
  for (Gen g : kAllGens) CHECK(commutator(c, phi_lambda({g, Side::Left})).is_zero());
  PowerSection s = sigma_cell(cell_param("m1"), cell_param("m2"));
  Weight nu = Weight::support_weight(v);
  CHECK(op_apply_section(c - DiffOp::scalar(model().cell(), chi(nu)), s).is_zero());
}

TEST_CASE("Casimir on U-polynomial multiples") {
  // (c - chi_nu)(f sigma) = (1/3)(a1 d12 d21 + a2 (d23 + U12 d13)(d32 + U21 d31) + a1 a2 d13 d31)(f) sigma
  const auto& cell = model().cell();
  DiffOp lemma = parse_diffop(
      "(1/3) * (a1 * d/dU12 d/dU21 + a2 * (d/dU23 + U12 * d/dU13) * (d/dU32 + U21 * d/dU31) + a1*a2 * d/dU13 d/dU31)",
      cell);
  PowerSection s = sigma_cell(cell_param("m1"), cell_param("m2"));
  DiffOp shifted = casimir() - DiffOp::scalar(cell, chi(Weight::support_weight(cell->vars)));
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    Poly f = testsupport::random_poly(rng, cell->vars, 8, 4, 3);
    for (const char* a : {"a1", "a2"}) f = f.partial_evaluate({{cell->vars->index(a), Rational(0)}});
    PowerSection lhs = op_apply_section(shifted, s * RatFunc(f));
    PowerSection rhs = s * op_apply(lemma, RatFunc(f));
    auto r = express_as_multiple(lhs, rhs.is_zero() ? s : rhs);
    if (rhs.is_zero())
      CHECK(lhs.is_zero());
    else {
      REQUIRE(r.ok);
      CHECK(r.scalar == RatFunc::constant(cell->vars, 1));
    }
  }
}

TEST_CASE("Weyl twists of sections") {
  const Model& m = model();
  AffineExpr m1 = m.param(m.matrix(), "m1"), m2 = m.param(m.matrix(), "m2");
  PowerSection s = sigma_matrix(m1, m2);
  CHECK(express_as_multiple(weyl_twist_section(s, Weyl::E), s).ok);
  PowerSection t = section_to_cell(weyl_twist_section(s, Weyl::S1, true));
  const auto& v = m.cell()->vars;
  Weight nu = Weight::support_weight(v);
  PowerSection expect = sigma_cell(cell_param("m1"), cell_param("m2")) *
                        PowerSection(RatFunc::constant(v, 1), {{parse_poly("a1 + U12*U21", v), nu.nu1}});
  auto r = express_as_multiple(t, expect);
  REQUIRE(r.ok);
  CHECK(r.scalar == RatFunc::constant(v, 1));
}

TEST_CASE("twisted operator on sigma") {
  const auto& v = model().cell()->vars;
  PowerSection s = sigma_cell(cell_param("m1"), cell_param("m2"));
  PowerSection r = op_apply_section(d_lambda_twisted(Weyl::S1), s);
  PowerSection expect = sigma_cell(cell_param("m1") + (-1), cell_param("m2") + (-1)) *
                        parse_ratfunc("m2*(m1*U12*U21 + (l2 - m1 + m2)*a1)", v);
  auto q = express_as_multiple(r, expect);
  REQUIRE(q.ok);
  CHECK(q.scalar == RatFunc::constant(v, 1));
  PowerSection c1 = op_apply_section(d_lambda_twisted(Weyl::E), s);
  auto k = express_as_multiple(c1, sigma_cell(cell_param("m1") + (-1), cell_param("m2") + (-1)));
  REQUIRE(k.ok);
  CHECK(k.scalar == parse_ratfunc("m1*m2", v));
}

TEST_CASE("twisted operators are regular") {
  const Model& m = model();
  for (Weyl w : {Weyl::E, Weyl::S1, Weyl::S2, Weyl::S1S2, Weyl::S2S1, Weyl::W0})
    CHECK_MESSAGE(regular_on(d_lambda_twisted(w), *m.cell()).regular, weyl_name(w));
  CHECK(regular_on(d_lambda_opposite(), *m.opposite()).regular);
  CHECK_FALSE(regular_on(d_lambda_opposite(), *m.matrix()).regular);
}

TEST_CASE("generator operators commute with the Euler operator") {
  DiffOp e = euler_matrix();
  for (Gen g : kAllGens) {
    CHECK(commutator(e, field(g, Side::Left)).is_zero());
    CHECK(commutator(e, field(g, Side::Right)).is_zero());
  }
  CHECK(commutator(e, d0_matrix()).is_zero());
}

TEST_CASE("Weights") {
  const auto& v = model().cell()->vars;
  Weight r = Weight::alpha1(v) + Weight::alpha2(v);
  CHECK(r.nu1.integer_value() == 1);
  CHECK(r.nu2.integer_value() == 1);
  CHECK(Weight::of(v, 2, 0).dominant() == true);
  CHECK(Weight::of(v, 2, -1).dominant() == false);
  CHECK_FALSE(Weight::support_weight(v).dominant().has_value());
  CHECK(Weight::of(v, 3, 1).star().nu1.integer_value() == 1);
}
