#include "dlambda/conics.hpp"

#include "dlambda/errors.hpp"

namespace dlambda::conics {

namespace {

const std::vector<std::string> kParams = {"l1", "l2"};
const std::array<std::pair<int, int>, 6> kUpper = {{{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};

std::string entry(const char* prefix, int i, int j) {
  if (i > j) std::swap(i, j);
  return prefix + std::to_string(i) + std::to_string(j);
}

Matrix3 product(const Matrix3& a, const Matrix3& b) {
  Matrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::vector<RatFunc> terms;
      for (int k = 0; k < 3; ++k) terms.push_back(a[i][k] * b[k][j]);
      r[i][j] = rf_sum(terms, a[0][0].vars());
    }
  return r;
}

Matrix3 transpose(const Matrix3& a) {
  Matrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
  return r;
}

Matrix3 parametrize(const VarTablePtr& v, Matrix3* s_prime) {
  auto x = [&](const char* n) { return RatFunc::variable(v, n); };
  RatFunc one = RatFunc::constant(v, 1), zero = RatFunc::constant(v, 0);
  Matrix3 u = {{{one, x("u12"), x("u13")}, {zero, one, x("u23")}, {zero, zero, one}}};
  Matrix3 u_inv = {{{one, -x("u12"), x("u12") * x("u23") - x("u13")}, {zero, one, -x("u23")}, {zero, zero, one}}};
  Matrix3 d = {{{one, zero, zero}, {zero, x("x"), zero}, {zero, zero, x("x") * x("y")}}};
  Matrix3 dp = {{{x("x") * x("y"), zero, zero}, {zero, x("y"), zero}, {zero, zero, one}}};
  if (s_prime) *s_prime = product(product(u, dp), transpose(u));
  return product(product(transpose(u_inv), d), u_inv);
}

// Big-cell coordinates from the entries of S with S11 = 1 (LDL^T).
std::map<std::string, RatFunc> from_entries(const VarTablePtr& v, const RatFunc& scale) {
  auto s = [&](const char* n) { return RatFunc::variable(v, n) / scale; };
  RatFunc x = s("S22") - s("S12") * s("S12");
  RatFunc l32 = (s("S23") - s("S12") * s("S13")) / x;
  RatFunc d33 = s("S33") - s("S13") * s("S13") - l32 * l32 * x;
  return {{"u12", -s("S12")}, {"u23", -l32}, {"u13", s("S12") * l32 - s("S13")}, {"x", x}, {"y", d33 / x}};
}

}  // namespace

const ConicModel& ConicModel::get() {
  static const ConicModel m;
  return m;
}

ConicModel::ConicModel() {
  conic_ = Chart::make("conic", VarTable::make({"u12", "u13", "u23", "x", "y"}, kParams));
  scaled_ = Chart::make("conic-scaled", VarTable::make({"u12", "u13", "u23", "x", "y", "t"}, kParams));
  entries_ = Chart::make("conic-entries", VarTable::make({"s12", "s13", "s22", "s23", "s33"}, kParams));
  std::vector<std::string> cn;
  for (auto [i, j] : kUpper) cn.push_back(entry("S", i, j));
  cone_ = Chart::make("conic-cone", VarTable::make(cn, kParams));

  // Entries chart: rename s_ij to S_ij with S11 = 1 by a table of its own.
  {
    const auto& ev = entries_->vars;
    auto tmp = VarTable::make({"S12", "S13", "S22", "S23", "S33"}, kParams);
    auto fwd = from_entries(tmp, RatFunc::constant(tmp, 1));
    std::map<std::string, RatFunc> rename;
    for (const char* n : {"12", "13", "22", "23", "33"})
      rename[std::string("S") + n] = RatFunc::variable(ev, std::string("s") + n);
    Substitution to_s = Substitution::make(tmp, ev, rename);
    std::map<std::string, RatFunc> forward, inverse;
    for (auto& [k, f] : fwd) forward[k] = substitute(f, to_s);
    Matrix3 s = parametrize(conic_->vars, nullptr);
    for (auto [i, j] : kUpper)
      if (i != 1 || j != 1) inverse[entry("s", i, j)] = s[i - 1][j - 1];
    to_entries_ = ChartMap::make(conic_, entries_, forward, inverse);
  }
  {
    const auto& cv = cone_->vars;
    auto forward = from_entries(cv, RatFunc::variable(cv, "S11"));
    forward["t"] = RatFunc::variable(cv, "S11");
    Matrix3 s = parametrize(scaled_->vars, nullptr);
    RatFunc t = RatFunc::variable(scaled_->vars, "t");
    std::map<std::string, RatFunc> inverse;
    for (auto [i, j] : kUpper) inverse[entry("S", i, j)] = t * s[i - 1][j - 1];
    to_cone_ = ChartMap::make(scaled_, cone_, forward, inverse);
  }
}

ConicPair conic_parametrization() {
  ConicPair p;
  p.s = parametrize(ConicModel::get().conic()->vars, &p.s_prime);
  return p;
}

bool in_conic_variety(const ConicPair& p) {
  Matrix3 m = product(p.s, p.s_prime);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i != j && !m[i][j].is_zero()) return false;
      if (i == j && !(m[i][j] == m[0][0])) return false;
    }
  return true;
}

std::vector<RatFunc> minors_2x2(const Matrix3& s) {
  std::vector<RatFunc> r;
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& a : pairs)
    for (const auto& b : pairs)
      r.push_back(s[a[0]][b[0]] * s[a[1]][b[1]] - s[a[0]][b[1]] * s[a[1]][b[0]]);
  return r;
}

DiffOp conic_d0() {
  const auto& c = ConicModel::get().conic();
  return op_compose(DiffOp::partial(c, "x"), DiffOp::partial(c, "y"));
}

DiffOp conic_d0_entries() {
  static const DiffOp d = transport(conic_d0(), ConicModel::get().to_entries());
  return d;
}

DiffOp conic_d0_cone() {
  static const DiffOp d = [] {
    const auto& c = ConicModel::get().scaled();
    return transport(op_compose(DiffOp::partial(c, "x"), DiffOp::partial(c, "y")), ConicModel::get().to_cone());
  }();
  return d;
}

namespace {

// W = xi^T S + S xi for a symmetric matrix of functions S.
Matrix3 infinitesimal(const pgl3::IntMatrix& xi, const Matrix3& s) {
  const VarTablePtr& v = s[0][0].vars();
  Matrix3 w;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::vector<RatFunc> t;
      for (int k = 0; k < 3; ++k) {
        if (xi[k][i]) t.push_back(s[k][j] * RatFunc::constant(v, xi[k][i]));
        if (xi[k][j]) t.push_back(s[i][k] * RatFunc::constant(v, xi[k][j]));
      }
      w[i][j] = rf_sum(t, v);
    }
  return w;
}

Matrix3 symbolic_matrix(const VarTablePtr& v, const char* prefix, bool unit_corner) {
  Matrix3 s;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      s[i - 1][j - 1] = unit_corner && i == 1 && j == 1 ? RatFunc::constant(v, 1) : RatFunc::variable(v, entry(prefix, i, j));
  return s;
}

}  // namespace

DiffOp conic_vector_field_cone(pgl3::Gen g) {
  const auto& c = ConicModel::get().cone();
  Matrix3 w = infinitesimal(pgl3::gen_matrix(g), symbolic_matrix(c->vars, "S", false));
  DiffOp r(c);
  for (auto [i, j] : kUpper) r = r + w[i - 1][j - 1] * DiffOp::partial(c, entry("S", i, j));
  return r;
}

DiffOp conic_vector_field_entries(pgl3::Gen g) {
  const auto& c = ConicModel::get().entries();
  Matrix3 s = symbolic_matrix(c->vars, "s", true);
  Matrix3 w = infinitesimal(pgl3::gen_matrix(g), s);
  DiffOp r(c);
  for (auto [i, j] : kUpper) {
    if (i == 1 && j == 1) continue;
    r = r + (w[i - 1][j - 1] - s[i - 1][j - 1] * w[0][0]) * DiffOp::partial(c, entry("s", i, j));
  }
  return r;
}

DiffOp conic_euler_cone() {
  const auto& c = ConicModel::get().cone();
  DiffOp r(c);
  for (auto [i, j] : kUpper) r = r + RatFunc::variable(c->vars, entry("S", i, j)) * DiffOp::partial(c, entry("S", i, j));
  return r;
}

DiffOp conic_d_lambda_cone() {
  const auto& c = ConicModel::get().cone();
  const auto& v = c->vars;
  Poly s11 = Poly::variable(v, "S11");
  Poly corner = s11 * Poly::variable(v, "S22") - Poly::variable(v, "S12") * Poly::variable(v, "S12");
  PowerSection f(RatFunc::constant(v, 1),
                 {{s11, AffineExpr::parameter(v, "l1")}, {corner, AffineExpr::parameter(v, "l2")}});
  return conjugate(conic_d0_cone(), f.inverse());
}

}  // namespace dlambda::conics
