#include "dlambda/pgl3.hpp"

#include <functional>
#include <mutex>

#include "dlambda/errors.hpp"

namespace dlambda::pgl3 {

namespace {

const std::vector<std::string> kParams = {"l1", "l2", "m1", "m2"};
const std::vector<std::string> kCellCoords = {"a1", "a2", "U12", "U21", "U13", "U31", "U23", "U32"};

std::string entry_name(int i, int j) { return "g" + std::to_string(i) + std::to_string(j); }

using PolyMatrix = std::array<std::array<Poly, 3>, 3>;

PolyMatrix poly_product(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Poly s(a[0][0].vars());
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

PolyMatrix to_poly_matrix(const IntMatrix& m, const VarTablePtr& v) {
  PolyMatrix r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = Poly::constant(v, m[i][j]);
  return r;
}

// u * diag(a1 a2, a2, 1) * u' over a table holding the big-cell names.
PolyMatrix big_cell_matrix(const VarTablePtr& v) {
  auto x = [&](const char* n) { return Poly::variable(v, n); };
  Poly one = Poly::constant(v, 1), zero(v);
  PolyMatrix u = {{{one, x("U12"), x("U13")}, {zero, one, x("U23")}, {zero, zero, one}}};
  PolyMatrix a = {{{x("a1") * x("a2"), zero, zero}, {zero, x("a2"), zero}, {zero, zero, one}}};
  PolyMatrix ul = {{{one, zero, zero}, {x("U21"), one, zero}, {x("U31"), x("U32"), one}}};
  return poly_product(poly_product(u, a), ul);
}

Monomial unit_index(std::size_t var, unsigned k = 1) {
  Monomial m;
  m.set(var, k);
  return m;
}

template <class K, class V, class F>
V memoized(std::map<K, V>& cache, std::mutex& mu, const K& key, F&& make) {
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  V value = make();
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(value)).first->second;
}

AffineExpr rebase_expr(const AffineExpr& e, const VarTablePtr& v) { return AffineExpr(rebase(e.poly(), v)); }

// Signs only: the matrices used here are signed permutations.
bool is_signed_permutation(const IntMatrix& m) {
  IntMatrix p = matrix_product(m, matrix_transpose(m));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (p[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

// The eight big-cell coordinates over a matrix table.
std::map<std::string, RatFunc> forward_formulas(const VarTablePtr& v) {
  auto g = [&](int i, int j) { return Poly::variable(v, entry_name(i, j)); };
  auto minor = [&](int i, int j) {
    int r[2], c[2], nr = 0, nc = 0;
    for (int k = 1; k <= 3; ++k) {
      if (k != i) r[nr++] = k;
      if (k != j) c[nc++] = k;
    }
    return g(r[0], c[0]) * g(r[1], c[1]) - g(r[0], c[1]) * g(r[1], c[0]);
  };
  Poly det = g(1, 1) * minor(1, 1) - g(1, 2) * minor(1, 2) + g(1, 3) * minor(1, 3);
  Poly d11 = minor(1, 1), g33 = g(3, 3);
  std::map<std::string, RatFunc> f;
  f["a1"] = RatFunc(g33 * det, d11 * d11);
  f["a2"] = RatFunc(d11, g33 * g33);
  f["U12"] = RatFunc(minor(2, 1), d11);
  f["U21"] = RatFunc(minor(1, 2), d11);
  f["U13"] = RatFunc(g(1, 3), g33);
  f["U31"] = RatFunc(g(3, 1), g33);
  f["U23"] = RatFunc(g(2, 3), g33);
  f["U32"] = RatFunc(g(3, 2), g33);
  return f;
}

PowerSection f_lambda_cone() {
  const Model& m = Model::get();
  const auto& v = m.cone()->vars;
  AffineExpr l1 = m.param(m.cone(), "l1"), l2 = m.param(m.cone(), "l2");
  return PowerSection(RatFunc::constant(v, 1),
                      {{Poly::variable(v, "t"), l1 + l2 * Rational(2)}, {Poly::variable(v, "a2"), l2}});
}

// Substitutes the images of the matrix entries into a section's bases,
// leaving signs and constants where they land.
PowerSection substitute_section(const PowerSection& s, const Substitution& sub) {
  std::vector<Poly> images;
  for (const auto& im : sub.images) images.push_back(im ? *im->as_poly() : Poly());
  std::vector<PowerFactor> fs;
  for (const auto& f : s.factors())
    fs.push_back({substitute_poly_to_poly(f.base, images, sub.target), rebase_expr(f.exponent, sub.target)});
  return PowerSection(substitute(s.prefactor(), sub), std::move(fs));
}

}  // namespace

IntMatrix matrix_product(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

IntMatrix matrix_commutator(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix p = matrix_product(a, b), q = matrix_product(b, a);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i][j] -= q[i][j];
  return p;
}

IntMatrix matrix_transpose(const IntMatrix& a) {
  IntMatrix r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
  return r;
}

std::string gen_name(Gen g) {
  static const char* names[] = {"X1", "X2", "X3", "Y1", "Y2", "Y3", "H1", "H2"};
  return names[static_cast<int>(g)];
}

std::string generator_name(const Generator& g) {
  return gen_name(g.label) + (g.side == Side::Left ? "-left" : "-right");
}

IntMatrix gen_matrix(Gen g) {
  IntMatrix m{};
  switch (g) {
    case Gen::X1: m[0][1] = 1; break;
    case Gen::X2: m[1][2] = 1; break;
    case Gen::X3: m[0][2] = 1; break;
    case Gen::Y1: m[1][0] = 1; break;
    case Gen::Y2: m[2][1] = 1; break;
    case Gen::Y3: m[2][0] = 1; break;
    case Gen::H1: m[0][0] = 1, m[1][1] = -1; break;
    case Gen::H2: m[1][1] = 1, m[2][2] = -1; break;
  }
  return m;
}

std::vector<std::pair<Gen, Rational>> decompose(const IntMatrix& m) {
  if (m[0][0] + m[1][1] + m[2][2] != 0) throw PreconditionError("matrix is not traceless");
  std::vector<std::pair<Gen, Rational>> r;
  auto put = [&](Gen g, int c) {
    if (c) r.emplace_back(g, Rational(c));
  };
  put(Gen::X1, m[0][1]);
  put(Gen::X2, m[1][2]);
  put(Gen::X3, m[0][2]);
  put(Gen::Y1, m[1][0]);
  put(Gen::Y2, m[2][1]);
  put(Gen::Y3, m[2][0]);
  put(Gen::H1, m[0][0]);
  put(Gen::H2, -m[2][2]);
  return r;
}

std::string weyl_name(Weyl w) {
  static const char* names[] = {"e", "s1", "s2", "s1s2", "s2s1", "w0"};
  return names[static_cast<int>(w)];
}

IntMatrix weyl_matrix(Weyl w) {
  const IntMatrix e = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const IntMatrix s1 = {{{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}}};
  const IntMatrix s2 = {{{1, 0, 0}, {0, 0, 1}, {0, -1, 0}}};
  switch (w) {
    case Weyl::E: return e;
    case Weyl::S1: return s1;
    case Weyl::S2: return s2;
    case Weyl::S1S2: return matrix_product(s1, s2);
    case Weyl::S2S1: return matrix_product(s2, s1);
    case Weyl::W0: return matrix_product(matrix_product(s1, s2), s1);
  }
  return e;
}

Weight Weight::of(const VarTablePtr& vars, long a, long b) {
  return {AffineExpr(vars, Rational(a)), AffineExpr(vars, Rational(b))};
}

Weight Weight::support_weight(const VarTablePtr& vars) {
  auto p = [&](const char* n) { return AffineExpr::parameter(vars, n); };
  return {p("l2") - p("m1") * Rational(2) + p("m2"), p("l1") + p("m1") - p("m2") * Rational(2)};
}

std::optional<bool> Weight::dominant() const {
  auto a = nu1.constant_value(), b = nu2.constant_value();
  if (!a || !b) return std::nullopt;
  return *a >= 0 && *b >= 0;
}

const Model& Model::get() {
  static const Model model;
  return model;
}

Model::Model() {
  std::vector<std::string> gn;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) gn.push_back(entry_name(i, j));
  auto gv = VarTable::make(gn, kParams);
  matrix_ = Chart::make("matrix", gv);
  cell_ = Chart::make("cell", VarTable::make(kCellCoords, kParams));
  std::vector<std::string> cn = kCellCoords;
  cn.push_back("t");
  cone_ = Chart::make("cone", VarTable::make(cn, kParams));

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g_[i][j] = Poly::variable(gv, entry_name(i + 1, j + 1));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r[2], c[2], nr = 0, nc = 0;
      for (int k = 0; k < 3; ++k) {
        if (k != i) r[nr++] = k;
        if (k != j) c[nc++] = k;
      }
      minor_[i][j] = g_[r[0]][c[0]] * g_[r[1]][c[1]] - g_[r[0]][c[1]] * g_[r[1]][c[0]];
    }
  det_ = g_[0][0] * minor_[0][0] - g_[0][1] * minor_[0][1] + g_[0][2] * minor_[0][2];
  opposite_ = matrix_->with_units("opposite", {g_[0][0], minor_[2][2]});

  const auto& cv = cone_->vars;
  PolyMatrix x = big_cell_matrix(cv);
  RatFunc t = RatFunc::variable(cv, "t");
  std::map<std::string, RatFunc> fwd, inv;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fwd[entry_name(i + 1, j + 1)] = t * RatFunc(x[i][j]);
  for (const auto& [name, f] : forward_formulas(gv)) inv[name] = f;
  inv["t"] = RatFunc(g_[2][2]);
  cdv_ = ChartMap::make(matrix_, cone_, fwd, inv);
}

AffineExpr Model::param(const ChartPtr& chart, const char* name) const {
  return AffineExpr::parameter(chart->vars, name);
}

std::map<std::string, RatFunc> cdv_forward() { return forward_formulas(Model::get().matrix()->vars); }

std::map<std::string, Poly> cdv_backward() {
  PolyMatrix x = big_cell_matrix(Model::get().cell()->vars);
  std::map<std::string, Poly> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != 2 || j != 2) r[entry_name(i + 1, j + 1)] = x[i][j];
  return r;
}

DiffOp infinitesimal_vector_field(const Generator& gen) {
  const Model& m = Model::get();
  const auto& v = m.matrix()->vars;
  IntMatrix xi = gen_matrix(gen.label);
  DiffOp r(m.matrix());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Poly c(v);
      for (int k = 0; k < 3; ++k) {
        if (gen.side == Side::Left && xi[i][k]) c -= m.g(k + 1, j + 1) * Rational(xi[i][k]);
        if (gen.side == Side::Right && xi[k][j]) c += m.g(i + 1, k + 1) * Rational(xi[k][j]);
      }
      if (!c.is_zero()) r.add_term(unit_index(v->index(entry_name(i + 1, j + 1))), RatFunc(c));
    }
  return r;
}

DiffOp restrict_to_cell(const DiffOp& a) {
  const Model& m = Model::get();
  require_same_chart(a.chart(), m.cone());
  const std::size_t t = m.cone()->vars->index("t");
  const auto& cv = m.cell()->vars;
  DiffOp r(m.cell());
  for (const auto& [idx, c] : a.terms()) {
    if (idx[t]) continue;
    if (c.depends_on(t)) throw PreconditionError("coefficient involves the scale t");
    r.add_term(idx, c.rebase(cv));
  }
  return r;
}

DiffOp to_cell(const DiffOp& a, bool twisted) {
  DiffOp on_cone = transport(a, Model::get().cdv());
  if (twisted) on_cone = conjugate(on_cone, f_lambda_cone());
  return restrict_to_cell(on_cone);
}

DiffOp vector_field_big_cell(const Generator& gen) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, DiffOp> cache;
  return memoized(cache, mu, {int(gen.label), int(gen.side)},
                  [&] { return to_cell(infinitesimal_vector_field(gen), false); });
}

DiffOp phi_lambda(const Generator& gen) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, DiffOp> cache;
  return memoized(cache, mu, {int(gen.label), int(gen.side)},
                  [&] { return to_cell(infinitesimal_vector_field(gen), true); });
}

RatFunc phi_lambda_correction(const Generator& gen) {
  DiffOp d = phi_lambda(gen) - vector_field_big_cell(gen);
  for (const auto& [idx, c] : d.terms())
    if (!idx.is_one()) throw Error("twisted field differs from the plain field above order zero");
  return d.coefficient(Monomial());
}

std::pair<DiffOp, DiffOp> partial_alpha_ops() {
  static const std::pair<DiffOp, DiffOp> ops = [] {
    const Model& m = Model::get();
    ChartMap back = m.cdv().reversed();
    return std::make_pair(transport(DiffOp::partial(m.cone(), "a1"), back),
                          transport(DiffOp::partial(m.cone(), "a2"), back));
  }();
  return ops;
}

DiffOp d0_matrix() {
  static const DiffOp d = [] {
    auto [p1, p2] = partial_alpha_ops();
    return op_compose(p1, p2);
  }();
  return d;
}

DiffOp d0_cell() {
  const Model& m = Model::get();
  return op_compose(DiffOp::partial(m.cell(), "a1"), DiffOp::partial(m.cell(), "a2"));
}

PowerSection f_lambda_matrix() {
  const Model& m = Model::get();
  return PowerSection(RatFunc::constant(m.matrix()->vars, 1),
                      {{m.g(3, 3), m.param(m.matrix(), "l1")}, {m.minor(1, 1), m.param(m.matrix(), "l2")}});
}

PowerSection f_lambda_star_matrix() {
  const Model& m = Model::get();
  return PowerSection(RatFunc::constant(m.matrix()->vars, 1),
                      {{m.g(1, 1), m.param(m.matrix(), "l1")}, {m.minor(3, 3), m.param(m.matrix(), "l2")}});
}

PowerSection sigma_matrix(const AffineExpr& m1, const AffineExpr& m2) {
  const Model& m = Model::get();
  const auto& v = m.matrix()->vars;
  AffineExpr a = rebase_expr(m1, v), b = rebase_expr(m2, v);
  AffineExpr nu1 = m.param(m.matrix(), "l2") - a * Rational(2) + b;
  AffineExpr nu2 = m.param(m.matrix(), "l1") + a - b * Rational(2);
  return PowerSection(RatFunc::constant(v, 1), {{m.g(3, 3), nu2}, {m.minor(1, 1), nu1}, {m.det(), a}});
}

PowerSection sigma_cell(const AffineExpr& m1, const AffineExpr& m2) {
  const auto& v = Model::get().cell()->vars;
  return PowerSection(RatFunc::constant(v, 1),
                      {{Poly::variable(v, "a1"), rebase_expr(m1, v)}, {Poly::variable(v, "a2"), rebase_expr(m2, v)}});
}

PowerSection section_to_cone(const PowerSection& s, bool up_to_constant) {
  const Model& m = Model::get();
  const Substitution& fwd = m.cdv().forward();
  const auto& cv = m.cone()->vars;
  std::vector<Poly> images;
  for (const auto& im : fwd.images) images.push_back(*im->as_poly());
  RatFunc pre = substitute(s.prefactor(), fwd);
  std::vector<PowerFactor> fs;
  for (const auto& f : s.factors()) {
    AffineExpr e = rebase_expr(f.exponent, cv);
    Poly p = substitute_poly_to_poly(f.base, images, cv);
    Monomial content = p.monomial_content();
    Poly q = p.divide_monomial(content);
    Rational lc = q.leading().second;
    for (std::size_t i = 0; i < cv->coordinate_count(); ++i)
      if (content[i]) fs.push_back({Poly::variable(cv, i), e * Rational(content[i])});
    if (!q.is_constant()) fs.push_back({q * Rational(1 / lc), e});
    if (lc == 1) continue;
    if (auto k = e.integer_value()) {
      pre = pre * RatFunc::constant(cv, lc).pow(static_cast<int>(*k));
    } else if (!up_to_constant) {
      throw PreconditionError("constant factor raised to a symbolic power");
    }
  }
  return PowerSection(pre, std::move(fs)).normalized();
}

PowerSection section_to_cell(const PowerSection& s) {
  const Model& m = Model::get();
  PowerSection c = section_to_cone(s * f_lambda_matrix().inverse());
  const auto& cv = m.cell()->vars;
  const std::size_t t = m.cone()->vars->index("t");
  if (c.prefactor().depends_on(t)) throw PreconditionError("section does not have the degree of f_lambda");
  std::vector<PowerFactor> fs;
  for (const auto& f : c.factors()) {
    if (f.base.depends_on(t)) throw PreconditionError("section does not have the degree of f_lambda");
    fs.push_back({rebase(f.base, cv), rebase_expr(f.exponent, cv)});
  }
  return PowerSection(c.prefactor().rebase(cv), std::move(fs));
}

namespace {

DiffOp compose_casimir(const std::function<DiffOp(Gen)>& field) {
  DiffOp h1 = field(Gen::H1), h2 = field(Gen::H2);
  DiffOp c = (h1 + h2) * Rational(1, 3);
  c = c + (op_compose(h1, h1) + op_compose(h2, h2) + op_compose(h1, h2)) * Rational(1, 9);
  DiffOp yx = op_compose(field(Gen::Y1), field(Gen::X1)) + op_compose(field(Gen::Y2), field(Gen::X2)) +
              op_compose(field(Gen::Y3), field(Gen::X3));
  return c + yx * Rational(1, 3);
}

}  // namespace

DiffOp casimir_matrix() {
  static const DiffOp c =
      compose_casimir([](Gen g) { return infinitesimal_vector_field({g, Side::Left}); });
  return c;
}

DiffOp casimir() {
  static const DiffOp c = compose_casimir([](Gen g) { return phi_lambda({g, Side::Left}); });
  return c;
}

RatFunc chi(const Weight& mu) {
  const Poly& a = mu.nu1.poly();
  const Poly& b = mu.nu2.poly();
  return RatFunc((a + b) * Rational(1, 3) + (a * a + a * b + b * b) * Rational(1, 9));
}

ChartMap group_substitution(Weyl w, Weyl w2) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, ChartMap> cache;
  return memoized(cache, mu, {int(w), int(w2)}, [&] {
    const Model& m = Model::get();
    const auto& v = m.matrix()->vars;
    IntMatrix a = weyl_matrix(w), b = weyl_matrix(w2);
    if (!is_signed_permutation(a) || !is_signed_permutation(b)) throw PreconditionError("not a signed permutation");
    PolyMatrix g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g[i][j] = m.g(i + 1, j + 1);
    PolyMatrix fwd = poly_product(poly_product(to_poly_matrix(matrix_transpose(a), v), g), to_poly_matrix(b, v));
    PolyMatrix inv = poly_product(poly_product(to_poly_matrix(a, v), g), to_poly_matrix(matrix_transpose(b), v));
    std::map<std::string, RatFunc> f, in;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        f[entry_name(i + 1, j + 1)] = RatFunc(fwd[i][j]);
        in[entry_name(i + 1, j + 1)] = RatFunc(inv[i][j]);
      }
    return ChartMap::make(m.matrix(), m.matrix(), f, in);
  });
}

DiffOp weyl_twist_op(const DiffOp& d, Weyl w) { return transport(d, group_substitution(w, w)); }

PowerSection weyl_twist_section(const PowerSection& s, Weyl w, bool inverse) {
  ChartMap map = group_substitution(w, w);
  PowerSection raw = substitute_section(s, inverse ? map.inverse() : map.forward());
  RatFunc pre = raw.prefactor();
  std::vector<PowerFactor> fs;
  for (std::size_t i = 0; i < raw.factors().size(); ++i) {
    const PowerFactor& f = raw.factors()[i];
    const bool flipped = (f.base.leading().second < 0) != (s.factors()[i].base.leading().second < 0);
    if (!flipped) {
      fs.push_back(f);
      continue;
    }
    auto k = f.exponent.integer_value();
    if (!k) throw PreconditionError("twist flips the sign of a base with a symbolic exponent");
    if (*k % 2) pre = -pre;
    fs.push_back({-f.base, f.exponent});
  }
  return PowerSection(pre, std::move(fs));
}

DiffOp d_lambda_matrix() {
  static const DiffOp d = conjugate(d0_matrix(), f_lambda_matrix().inverse());
  return d;
}

DiffOp d_lambda_twisted(Weyl w) {
  static std::mutex mu;
  static std::map<int, DiffOp> cache;
  return memoized(cache, mu, int(w), [&] {
    const Model& m = Model::get();
    DiffOp on_cone = transport(weyl_twist_op(d0_matrix(), w), m.cdv());
    PowerSection f = f_lambda_matrix();
    PowerSection wf = substitute_section(f, group_substitution(w, w).forward());
    PowerSection k = section_to_cone(f * wf.inverse(), true);
    return restrict_to_cell(conjugate(on_cone, k));
  });
}

DiffOp d_lambda_opposite() {
  return conjugate(d0_matrix(), f_lambda_star_matrix() * f_lambda_matrix().inverse());
}

DiffOp euler_matrix() {
  const Model& m = Model::get();
  DiffOp e(m.matrix());
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      e.add_term(unit_index(m.matrix()->vars->index(entry_name(i, j))), RatFunc(m.g(i, j)));
  return e;
}

std::string minor_text(int i, int j) {
  int r[2], c[2], nr = 0, nc = 0;
  for (int k = 1; k <= 3; ++k) {
    if (k != i) r[nr++] = k;
    if (k != j) c[nc++] = k;
  }
  auto e = [](int a, int b) { return entry_name(a, b); };
  return "(" + e(r[0], c[0]) + "*" + e(r[1], c[1]) + " - " + e(r[0], c[1]) + "*" + e(r[1], c[0]) + ")";
}

}  // namespace dlambda::pgl3
