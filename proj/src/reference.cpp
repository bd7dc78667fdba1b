#include "dlambda/reference.hpp"

#include <regex>

#include "dlambda/conics.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/pgl3.hpp"
#include "dlambda/text.hpp"

namespace dlambda::ref {

namespace {

// Replaces the tokens D11 .. D33 and Det by their expansions.
std::string expand_minors(const std::string& s) {
  static const std::regex tok(R"(\bD([1-3])([1-3])\b|\bDet\b)");
  std::string out;
  auto it = std::sregex_iterator(s.begin(), s.end(), tok);
  std::size_t last = 0;
  for (; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out += s.substr(last, m.position() - last);
    if (m.str() == "Det")
      out += "(g11*(" + pgl3::minor_text(1, 1) + ") - g12*(" + pgl3::minor_text(1, 2) + ") + g13*(" +
             pgl3::minor_text(1, 3) + "))";
    else
      out += "(" + pgl3::minor_text(std::stoi(m.str(1)), std::stoi(m.str(2))) + ")";
    last = m.position() + m.length();
  }
  return out + s.substr(last);
}

std::vector<Display> build() {
  using T = Table;
  return {
      {"cdv.forward.a1", T::Matrix, "g33*Det/D11^2", "a1 in the matrix entries"},
      {"cdv.forward.a2", T::Matrix, "D11/g33^2", "a2 in the matrix entries"},
      {"cdv.forward.U12", T::Matrix, "D21/D11", "U12 in the matrix entries"},
      {"cdv.forward.U21", T::Matrix, "D12/D11", "U21 in the matrix entries"},
      {"cdv.forward.U13", T::Matrix, "g13/g33", "U13 in the matrix entries"},
      {"cdv.forward.U31", T::Matrix, "g31/g33", "U31 in the matrix entries"},
      {"cdv.forward.U23", T::Matrix, "g23/g33", "U23 in the matrix entries"},
      {"cdv.forward.U32", T::Matrix, "g32/g33", "U32 in the matrix entries"},
      {"cdv.backward.g11", T::Cell, "a1*a2 + a2*U12*U21 + U13*U31", "g11/g33 on the big cell"},
      {"cdv.backward.g12", T::Cell, "a2*U12 + U13*U32", "g12/g33 on the big cell"},
      {"cdv.backward.g13", T::Cell, "U13", "g13/g33 on the big cell"},
      {"cdv.backward.g21", T::Cell, "a2*U21 + U23*U31", "g21/g33 on the big cell"},
      {"cdv.backward.g22", T::Cell, "a2 + U23*U32", "g22/g33 on the big cell"},
      {"cdv.backward.g23", T::Cell, "U23", "g23/g33 on the big cell"},
      {"cdv.backward.g31", T::Cell, "U31", "g31/g33 on the big cell"},
      {"cdv.backward.g32", T::Cell, "U23", "g32/g33 on the big cell"},

      {"field.matrix.Y1", T::Matrix, "-g11*d/dg21 - g12*d/dg22 - g13*d/dg23", "left Y1, matrix chart"},
      {"field.matrix.Y2", T::Matrix, "-g21*d/dg31 - g22*d/dg32 - g23*d/dg33", "left Y2, matrix chart"},
      {"field.matrix.Y3", T::Matrix, "-g31*d/dg21 - g12*d/dg32 - g13*d/dg33", "left Y3, matrix chart"},
      {"field.matrix.X1", T::Matrix, "-g21*d/dg11 - g22*d/dg12 - g23*d/dg13", "left X1, matrix chart"},
      {"field.matrix.X2", T::Matrix, "-g31*d/dg21 - g32*d/dg22 - g33*d/dg23", "left X2, matrix chart"},
      {"field.matrix.X3", T::Matrix, "-g31*d/dg11 - g32*d/dg12 - g33*d/dg13", "left X3, matrix chart"},
      {"field.matrix.H1", T::Matrix,
       "-g11*d/dg11 - g12*d/dg12 - g13*d/dg13 + g21*d/dg21 + g22*d/dg22 + g23*d/dg23", "left H1, matrix chart"},
      {"field.matrix.H2", T::Matrix,
       "-g21*d/dg21 - g22*d/dg22 - g23*d/dg23 + g31*d/dg31 + g32*d/dg32 + g33*d/dg33", "left H2, matrix chart"},
      {"field.cell.Y1", T::Cell, "2*U12*a1*d/da1 - U12*a2*d/da2 - U13*d/dU23 - U12^2*d/dU12 - a1*d/dU21",
       "left Y1, big cell"},
      {"field.cell.Y2", T::Cell,
       "-U23*a1*d/da1 + 2*U23*a2*d/da2 + (U13 - U12*U23)*d/dU12 + U23^2*d/dU23 - U13*U23*d/dU13"
       " - a2*(U21*d/dU31 + d/dU32)",
       "left Y2, big cell"},
      {"field.cell.Y3", T::Cell,
       "(U13 - 2*U13*U32)*a1*d/da1 + (U13 + U12*U23)*a2*d/da2 + (U13 - U12*U23)*U12*d/dU12 + U13*U23*d/dU23"
       " + U13^2*d/dU13 + a1*U23*d/dU21 - a2*(U12*d/dU32 + U12*U21*d/dU31) - a1*a2*d/dU31",
       "left Y3, big cell"},
      {"field.cell.X1", T::Cell, "-d/dU12 - U23*d/dU13", "left X1, big cell"},
      {"field.cell.X2", T::Cell, "-d/dU23", "left X2, big cell"},
      {"field.cell.X3", T::Cell, "-d/dU13", "left X3, big cell"},

      {"dalpha.1", T::Matrix, "D11/g33*d/dg11", "d/da1 on the matrix chart"},
      {"dalpha.2", T::Matrix, "g33/D11*(D22*d/dg11 + D11*d/dg22 + D21*d/dg12 + D12*d/dg21)",
       "d/da2 on the matrix chart"},
      {"d0.matrix", T::Matrix, "d/dg11*(D22*d/dg11 + D11*d/dg22 + D21*d/dg12 + D12*d/dg21)",
       "D0 on the matrix chart"},

      {"phi.correction.Y1", T::Cell, "-l2*U12", "twisted Y1 minus untwisted"},
      {"phi.correction.Y2", T::Cell, "-l1*U23", "twisted Y2 minus untwisted"},
      {"phi.correction.Y3", T::Cell, "-l1*U13 + l2*(U12*U23 - U13)", "twisted Y3 minus untwisted"},
      {"phi.correction.X1", T::Cell, "0", "twisted X1 minus untwisted"},
      {"phi.correction.X2", T::Cell, "0", "twisted X2 minus untwisted"},
      {"phi.correction.X3", T::Cell, "0", "twisted X3 minus untwisted"},

      {"casimir.chi", T::Weights, "(mu1 + mu2)/3 + (mu1^2 + mu1*mu2 + mu2^2)/9", "Casimir eigenvalue on L(mu)"},
      // The second factor is printed as d/dU32 + U21 d/dU31 with a misplaced brace.
      {"casimir.lemma", T::Cell,
       "(1/3)*(a1*d/dU12 d/dU21 + a2*(d/dU23 + U12*d/dU13)*(d/dU32 + U21*d/dU31) + a1*a2*d/dU13 d/dU31)",
       "(c - chi_nu) on U-polynomial multiples of sigma_nu"},

      {"case.1", T::Cell, "m1*m2", "case 1 scalar"},
      {"case.2b", T::Cell, "-(m2/3)*((m1 + nu1)*(nu1 + 1) + nu1)", "case 2 scalar, nu -> nu + alpha2"},
      {"case.2b.step", T::Cell, "m2*(m1/3 - (m1 + nu1)*(nu1 + 2)/3)", "case 2 scalar, intermediate line"},
      {"case.3a", T::Cell,
       "-(2/3^5)*(nu2 + 3)*(nu1 + m1 + 1)*(nu1 + nu2 + 1)*(nu1 + nu2 + m2 + 2)*(2*nu1 + nu2 + 3)*nu1*(nu1 - 1)",
       "case 3 scalar r, nu -> nu - alpha1"},
      {"case.4", T::Cell, "-(2/3)*(m1 + 4)*(m2 + 4)", "case 4 scalar, sigma_rho -> sigma_0"},

      {"conic.d0", T::Conic, "d/dx d/dy", "order-two operator on the conic big cell"},
  };
}

}  // namespace

const std::vector<Display>& displays() {
  static const std::vector<Display> d = build();
  return d;
}

const Display& display(std::string_view id) {
  for (const auto& d : displays())
    if (d.id == id) return d;
  throw PreconditionError("unknown display id: " + std::string(id));
}

ChartPtr table_chart(Table t) {
  static const ChartPtr weights = Chart::make("weights", VarTable::make({}, {"mu1", "mu2"}));
  switch (t) {
    case Table::Matrix: return pgl3::Model::get().matrix();
    case Table::Cell: return pgl3::Model::get().cell();
    case Table::Weights: return weights;
    case Table::Conic: return conics::ConicModel::get().conic();
  }
  return weights;
}

std::string expand_weights(std::string e) {
  const std::pair<const char*, const char*> subs[] = {{"nu1", "(l2 - 2*m1 + m2)"}, {"nu2", "(l1 + m1 - 2*m2)"}};
  for (const auto& [k, v] : subs)
    for (std::size_t p; (p = e.find(k)) != std::string::npos;) e.replace(p, 3, v);
  return e;
}

RatFunc as_function(const Display& d) {
  return parse_ratfunc(expand_weights(expand_minors(d.text)), table_chart(d.table)->vars);
}

DiffOp as_operator(const Display& d) { return parse_diffop(expand_minors(d.text), table_chart(d.table)); }

}  // namespace dlambda::ref
