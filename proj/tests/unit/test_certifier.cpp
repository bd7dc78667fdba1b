#include "doctest.h"
#include "dlambda/certifier.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/text.hpp"

using namespace dlambda;
using namespace dlambda::cert;

namespace {

const VarTablePtr& vars() { return pgl3::Model::get().cell()->vars; }

Rational at(const RatFunc& f, long l1, long l2, long m1, long m2) {
  const auto& v = vars();
  return *f.partial_evaluate({{v->index("l1"), l1}, {v->index("l2"), l2}, {v->index("m1"), m1}, {v->index("m2"), m2}})
              .constant_value();
}

// Brute-force enumeration over a generous box.
std::vector<std::pair<long, long>> enumerate(long l1, long l2) {
  std::vector<std::pair<long, long>> r;
  for (long m1 = 0; m1 < 30; ++m1)
    for (long m2 = 0; m2 < 30; ++m2)
      if (l2 - 2 * m1 + m2 >= 0 && l1 + m1 - 2 * m2 >= 0) r.emplace_back(m1, m2);
  return r;
}

}  // namespace

TEST_CASE("dominant support matches enumeration") {
  for (long l1 = -3; l1 <= 7; ++l1)
    for (long l2 = -3; l2 <= 7; ++l2) {
      std::vector<std::pair<long, long>> got;
      for (const auto& p : dominant_support(l1, l2)) got.emplace_back(p.m1, p.m2);
      CHECK(got == enumerate(l1, l2));
    }
  CHECK(dominant_support(0, 0).size() == 1);
  CHECK(dominant_support(-1, 0).empty());
  auto s = dominant_support(1, 1);
  REQUIRE(s.size() == 2);
  CHECK(s[1].m1 == 1);
  CHECK(s[1].nu1 == 0);
}

TEST_CASE("module dimensions") {
  CHECK(module_dimension(0, 0) == 1);
  CHECK(module_dimension(1, 1) == 65);
  CHECK(module_dimension(-1, 0) == 0);
  CHECK(weyl_dimension(1, 0) == 3);
  CHECK(weyl_dimension(2, 0) == 6);
}

TEST_CASE("symbolic case scalars equal the engine-derived closed forms") {
  for (Case c : kAllCases) {
    const CaseScalar& s = case_scalar(c);
    REQUIRE_MESSAGE(s.ok, case_label(c));
    CHECK_MESSAGE(s.scalar == closed_form(c), case_label(c));
  }
  CHECK(case_scalar(Case::One).scalar == parse_ratfunc("m1*m2", vars()));
  CHECK(case_scalar(Case::Four).scalar == parse_ratfunc("-(2/3)*(m1 + 4)*(m2 + 4)", vars()));
}

TEST_CASE("displayed case forms") {
  CHECK(*displayed_form(Case::ThreeA) == case_scalar(Case::ThreeA).scalar);
  CHECK(*displayed_form(Case::Four) == case_scalar(Case::Four).scalar);
  // The displayed alpha2 scalar uses chi_(nu+alpha2) - chi_(nu+rho) = -(nu1 + 2)/3; it is -(nu1 + 1)/3.
  RatFunc diff = case_scalar(Case::TwoB).scalar - *displayed_form(Case::TwoB);
  CHECK(diff == parse_ratfunc("(1/3)*m2*(l2 - m1 + m2)", vars()));
  CHECK_FALSE(displayed_form(Case::TwoA).has_value());
}

TEST_CASE("sampled scalars agree with the symbolic ones") {
  const long pts[][4] = {{2, 3, 1, 1}, {1, 2, 0, 1}, {3, 1, 1, 2}, {4, 4, 2, 1}, {0, 4, 1, 2}};
  for (const auto& p : pts)
    for (Case c : {Case::One, Case::TwoA, Case::TwoB, Case::ThreeA, Case::ThreeB}) {
      CaseScalar s = case_scalar_at(c, p[0], p[1], p[2], p[3]);
      REQUIRE(s.ok);
      CHECK(*s.scalar.constant_value() == at(case_scalar(c).scalar, p[0], p[1], p[2], p[3]));
    }
  // nu = rho at m = (1, 2) needs l1 = 4, l2 = 1.
  CaseScalar four = case_scalar_at(Case::Four, 4, 1, 1, 2);
  REQUIRE(four.ok);
  CHECK(*four.scalar.constant_value() == Rational(-2, 3) * 5 * 6);
  CHECK_THROWS_AS(case_scalar_at(Case::Four, 0, 0, 0, 0), PreconditionError);
}

TEST_CASE("case 3 at the first dominant point") {
  // nu = (2, 0), m = (1, 1): l2 = 3, l1 = 1.
  Rational r = at(case_scalar(Case::ThreeA).scalar, 1, 3, 1, 1);
  CHECK(r == Rational(-2, 243) * 3 * 4 * 3 * 5 * 7 * 2 * 1);
  CHECK(sgn(r) < 0);
  CHECK(at(case_scalar(Case::ThreeA).scalar, 0, 2, 1, 1) == 0);
}

TEST_CASE("alpha2 scalar is negative on dominant targets") {
  for (long l1 = 0; l1 <= 6; ++l1)
    for (long l2 = 0; l2 <= 6; ++l2)
      for (const auto& p : dominant_support(l1, l2))
        if (p.m2 >= 1 && p.nu1 >= 1) CHECK(sgn(at(case_scalar(Case::TwoB).scalar, l1, l2, p.m1, p.m2)) < 0);
}

TEST_CASE("certificates") {
  Certificate z = certify(-1, 0);
  CHECK(z.zero());
  CHECK(z.status() == "zero");
  CHECK(check_certificate(z).ok);
  Certificate one = certify(0, 0);
  CHECK(one.support.size() == 1);
  CHECK(one.status() == "connected");
  Certificate c = certify(1, 1);
  REQUIRE(c.support.size() == 2);
  CHECK(c.connected());
  bool saw1 = false, saw4 = false;
  for (const auto& e : c.edges) {
    if (e.label == Case::One) saw1 = e.scalar == 1;
    if (e.label == Case::Four) saw4 = e.scalar == Rational(-32, 3);
  }
  CHECK(saw1);
  CHECK(saw4);
  CHECK(check_certificate(c).ok);
}

TEST_CASE("certificates on the grid are connected and validate") {
  for (long l1 = 0; l1 <= 4; ++l1)
    for (long l2 = 0; l2 <= 4; ++l2) {
      Certificate c = certify(l1, l2);
      CHECK(c.connected());
      auto k = check_certificate(c);
      CHECK_MESSAGE(k.ok, l1, " ", l2, " ", (k.problems.empty() ? "" : k.problems.front()));
    }
}

TEST_CASE("sampled certificates match symbolic ones") {
  Certificate a = certify(2, 3), b = certify(2, 3, ParamMode::Sampled);
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) CHECK(a.edges[i].scalar == b.edges[i].scalar);
}

TEST_CASE("the checker rejects tampering") {
  Certificate c = certify(2, 2);
  REQUIRE(check_certificate(c).ok);
  Certificate bad = c;
  bad.edges.front().scalar += 1;
  CHECK_FALSE(check_certificate(bad).ok);
  bad = c;
  bad.paths.pop_back();
  CHECK_FALSE(check_certificate(bad).ok);
  bad = c;
  bad.support.pop_back();
  CHECK_FALSE(check_certificate(bad).ok);
}

TEST_CASE("transcript mentions every move") {
  std::string t = transcript(certify(1, 1));
  CHECK(t.find("case 4") != std::string::npos);
  CHECK(t.find("status: connected") != std::string::npos);
}
