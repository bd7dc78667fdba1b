#include "dlambda/certifier.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>

#include "dlambda/errors.hpp"
#include "dlambda/reference.hpp"
#include "dlambda/text.hpp"

namespace dlambda::cert {

using pgl3::Model;
using pgl3::Weight;
using pgl3::Weyl;

namespace {

const VarTablePtr& cell_vars() { return Model::get().cell()->vars; }

AffineExpr param(const char* n) { return AffineExpr::parameter(cell_vars(), n); }

// nu1, nu2 spelled out so closed forms can be written in l and m.
std::string expand_nu(std::string e) {
  const std::pair<const char*, const char*> subs[] = {{"N1", "(l2 - 2*m1 + m2)"}, {"N2", "(l1 + m1 - 2*m2)"}};
  for (const auto& [k, v] : subs)
    for (std::size_t p; (p = e.find(k)) != std::string::npos;) e.replace(p, 2, v);
  return e;
}

const char* closed_form_source(Case c) {
  switch (c) {
    case Case::One: return "m1*m2";
    case Case::TwoA: return "-(1/3)*m1*N2*(m2 + N2 + 1)";
    case Case::TwoB: return "-(1/3)*m2*N1*(m1 + N1 + 1)";
    case Case::ThreeA:
      return "-(2/243)*(N2 + 3)*(N1 + m1 + 1)*(N1 + N2 + 1)*(N1 + N2 + m2 + 2)*(2*N1 + N2 + 3)*N1*(N1 - 1)";
    case Case::ThreeB:
      return "-(2/243)*(N1 + 3)*(N2 + m2 + 1)*(N1 + N2 + 1)*(N1 + N2 + m1 + 2)*(N1 + 2*N2 + 3)*N2*(N2 - 1)";
    case Case::Four: return "-(2/3)*(m1 + 4)*(m2 + 4)";
  }
  return "";
}

std::map<std::size_t, Rational> param_point(long l1, long l2, long m1, long m2) {
  const auto& v = cell_vars();
  return {{v->index("l1"), l1}, {v->index("l2"), l2}, {v->index("m1"), m1}, {v->index("m2"), m2}};
}

DiffOp specialize_op(const DiffOp& d, const std::map<std::size_t, Rational>& p) {
  return d.map_coefficients([&](const RatFunc& c) { return c.partial_evaluate(p); });
}

// Case 4 lives at nu = rho: l1 = 1 - m1 + 2 m2, l2 = 1 + 2 m1 - m2.
PowerSection at_rho(const PowerSection& s) {
  const auto& v = cell_vars();
  Substitution sub = Substitution::make(v, v, {{"l1", parse_ratfunc("1 - m1 + 2*m2", v)},
                                               {"l2", parse_ratfunc("1 + 2*m1 - m2", v)}});
  std::vector<PowerFactor> fs;
  for (const auto& f : s.factors()) fs.push_back({f.base, AffineExpr(*substitute(RatFunc(f.exponent.poly()), sub).as_poly())});
  return PowerSection(substitute(s.prefactor(), sub), std::move(fs));
}

PowerSection target_section(Case c, const AffineExpr& m1, const AffineExpr& m2) {
  auto [d1, d2] = case_shift(c);
  return pgl3::sigma_cell(m1 + d1, m2 + d2);
}

PowerSection apply_case(const DiffOp& twisted, const DiffOp& casimir, const std::vector<RatFunc>& chis,
                        const PowerSection& sigma) {
  PowerSection r = op_apply_section(twisted, sigma);
  const ChartPtr& cell = Model::get().cell();
  for (const auto& x : chis) r = op_apply_section(casimir - DiffOp::scalar(cell, x), r);
  return r;
}

}  // namespace

std::string case_label(Case c) {
  static const char* names[] = {"1", "2a", "2b", "3a", "3b", "4"};
  return names[static_cast<int>(c)];
}

std::optional<Case> parse_case_label(const std::string& s) {
  for (Case c : kAllCases)
    if (case_label(c) == s) return c;
  return std::nullopt;
}

std::array<long, 2> case_shift(Case c) {
  switch (c) {
    case Case::One: return {-1, -1};
    case Case::TwoA: return {-1, 0};
    case Case::TwoB: return {0, -1};
    case Case::ThreeA: return {1, 0};
    case Case::ThreeB: return {0, 1};
    case Case::Four: return {1, 1};
  }
  return {0, 0};
}

Weyl case_twist(Case c) {
  switch (c) {
    case Case::One: return Weyl::E;
    case Case::TwoA: return Weyl::S2;
    case Case::TwoB: return Weyl::S1;
    case Case::ThreeA: return Weyl::S1S2;
    case Case::ThreeB: return Weyl::S2S1;
    case Case::Four: return Weyl::W0;
  }
  return Weyl::E;
}

std::vector<Weight> casimir_factors(Case c) {
  const auto& v = cell_vars();
  Weight nu = Weight::support_weight(v);
  Weight rho = Weight::rho(v), a1 = Weight::alpha1(v), a2 = Weight::alpha2(v);
  switch (c) {
    case Case::One: return {};
    case Case::TwoA:
    case Case::TwoB: return {nu + rho};
    case Case::ThreeA: return {nu, nu + a2, nu - a1 + a2, nu + a1, nu + rho};
    case Case::ThreeB: return {nu, nu + a1, nu - a2 + a1, nu + a2, nu + rho};
    case Case::Four: return {nu, nu + a1, nu + rho};
  }
  return {};
}

PowerSection case_image(Case c) {
  std::vector<RatFunc> chis;
  for (const auto& w : casimir_factors(c)) chis.push_back(pgl3::chi(w));
  PowerSection r = apply_case(pgl3::d_lambda_twisted(case_twist(c)), pgl3::casimir(), chis,
                              pgl3::sigma_cell(param("m1"), param("m2")));
  return c == Case::Four ? at_rho(r) : r;
}

const CaseScalar& case_scalar(Case c) {
  static std::mutex mu;
  static std::map<Case, CaseScalar> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
  }
  auto m = express_as_multiple(case_image(c), target_section(c, param("m1"), param("m2")));
  CaseScalar s{m.ok, m.scalar, m.residual};
  std::lock_guard lock(mu);
  return cache.emplace(c, std::move(s)).first->second;
}

CaseScalar case_scalar_at(Case c, long l1, long l2, long m1, long m2) {
  const auto& v = cell_vars();
  const long nu1 = l2 - 2 * m1 + m2, nu2 = l1 + m1 - 2 * m2;
  if (c == Case::Four && (nu1 != 1 || nu2 != 1)) throw PreconditionError("case 4 needs nu = rho");
  auto p = param_point(l1, l2, m1, m2);
  std::vector<RatFunc> chis;
  for (const auto& w : casimir_factors(c))
    chis.push_back(pgl3::chi(Weight{w.nu1.partial_evaluate(p), w.nu2.partial_evaluate(p)}));
  DiffOp twisted = specialize_op(pgl3::d_lambda_twisted(case_twist(c)), p);
  DiffOp casimir = chis.empty() ? DiffOp(Model::get().cell()) : specialize_op(pgl3::casimir(), p);
  AffineExpr a(v, m1), b(v, m2);
  PowerSection r = apply_case(twisted, casimir, chis, pgl3::sigma_cell(a, b));
  auto m = express_as_multiple(r, target_section(c, a, b));
  return {m.ok, m.scalar, m.residual};
}

RatFunc closed_form(Case c) { return parse_ratfunc(expand_nu(closed_form_source(c)), cell_vars()); }

std::string closed_form_text(Case c) {
  std::string s = closed_form_source(c);
  for (std::size_t p; (p = s.find("N1")) != std::string::npos;) s.replace(p, 2, "nu1");
  for (std::size_t p; (p = s.find("N2")) != std::string::npos;) s.replace(p, 2, "nu2");
  return s;
}

std::optional<RatFunc> displayed_form(Case c) {
  switch (c) {
    case Case::One: return ref::as_function(ref::display("case.1"));
    case Case::TwoB: return ref::as_function(ref::display("case.2b"));
    case Case::ThreeA: return ref::as_function(ref::display("case.3a"));
    case Case::Four: return ref::as_function(ref::display("case.4"));
    default: return std::nullopt;
  }
}

std::vector<SupportPoint> dominant_support(long l1, long l2) {
  std::vector<SupportPoint> r;
  // 2 nu2 + nu1 = 2 l1 + l2 - 3 m2 and 2 nu1 + nu2 = l1 + 2 l2 - 3 m1.
  const long b1 = (l1 + 2 * l2) / 3, b2 = (2 * l1 + l2) / 3;
  for (long m1 = 0; m1 <= b1; ++m1)
    for (long m2 = 0; m2 <= b2; ++m2) {
      long nu1 = l2 - 2 * m1 + m2, nu2 = l1 + m1 - 2 * m2;
      if (nu1 >= 0 && nu2 >= 0) r.push_back({m1, m2, nu1, nu2});
    }
  return r;
}

long long weyl_dimension(long nu1, long nu2) {
  return static_cast<long long>(nu1 + 1) * (nu2 + 1) * (nu1 + nu2 + 2) / 2;
}

long long module_dimension(long l1, long l2) {
  long long s = 0;
  for (const auto& p : dominant_support(l1, l2)) {
    long long d = weyl_dimension(p.nu1, p.nu2);
    s += d * d;
  }
  return s;
}

std::string Certificate::status() const {
  if (zero()) return "zero";
  return connected() ? "connected" : "disconnected";
}

namespace {

struct Graph {
  const Certificate& cert;
  std::map<std::pair<long, long>, std::size_t> index;
  // out[point] -> edge ids in edge order
  std::vector<std::vector<std::size_t>> out;

  explicit Graph(const Certificate& c) : cert(c), out(c.support.size()) {
    for (std::size_t i = 0; i < c.support.size(); ++i) index[{c.support[i].m1, c.support[i].m2}] = i;
    for (std::size_t e = 0; e < c.edges.size(); ++e) out[c.edges[e].from].push_back(e);
  }

  std::optional<std::size_t> edge(std::size_t from, Case label) const {
    for (std::size_t e : out[from])
      if (cert.edges[e].label == label) return e;
    return std::nullopt;
  }

  std::optional<std::vector<std::size_t>> bfs(std::size_t from, std::size_t to) const {
    std::vector<std::optional<std::size_t>> via(cert.support.size());
    std::vector<bool> seen(cert.support.size());
    std::deque<std::size_t> q{from};
    seen[from] = true;
    while (!q.empty()) {
      std::size_t p = q.front();
      q.pop_front();
      if (p == to) break;
      for (std::size_t e : out[p]) {
        std::size_t n = cert.edges[e].to;
        if (seen[n]) continue;
        seen[n] = true;
        via[n] = e;
        q.push_back(n);
      }
    }
    if (!seen[to]) return std::nullopt;
    std::vector<std::size_t> path;
    for (std::size_t p = to; p != from; p = cert.edges[*via[p]].from) path.push_back(*via[p]);
    std::reverse(path.begin(), path.end());
    return path;
  }

  // Move order of the induction on |m' - m|: case 1, then 2, then 3, then 4.
  std::vector<Case> preferred(const SupportPoint& p, const SupportPoint& t) const {
    const long d1 = t.m1 - p.m1, d2 = t.m2 - p.m2;
    if (d1 < 0 && d2 < 0) return {Case::One, Case::TwoA, Case::TwoB};
    if (d1 < 0) return {Case::TwoA};
    if (d2 < 0) return {Case::TwoB};
    if (d2 == 0) return {Case::ThreeA};
    if (d1 == 0) return {Case::ThreeB};
    return {Case::ThreeA, Case::ThreeB, Case::Four};
  }

  std::optional<std::vector<std::size_t>> path(std::size_t from, std::size_t to) const {
    std::vector<std::size_t> r;
    std::size_t p = from;
    auto dist = [&](std::size_t a) {
      return std::labs(cert.support[a].m1 - cert.support[to].m1) + std::labs(cert.support[a].m2 - cert.support[to].m2);
    };
    while (p != to) {
      std::optional<std::size_t> next;
      for (Case c : preferred(cert.support[p], cert.support[to])) {
        auto e = edge(p, c);
        if (e && dist(cert.edges[*e].to) < dist(p)) {
          next = e;
          break;
        }
      }
      if (!next) {
        auto rest = bfs(p, to);
        if (!rest) return std::nullopt;
        r.insert(r.end(), rest->begin(), rest->end());
        return r;
      }
      r.push_back(*next);
      p = cert.edges[*next].to;
    }
    return r;
  }
};

Rational evaluate_scalar(const RatFunc& f, long l1, long l2, long m1, long m2) {
  auto v = f.partial_evaluate(param_point(l1, l2, m1, m2)).constant_value();
  if (!v) throw Error("case scalar does not reduce to a number");
  return *v;
}

}  // namespace

Certificate certify(long l1, long l2, ParamMode mode) {
  Certificate c;
  c.l1 = l1;
  c.l2 = l2;
  c.mode = mode;
  c.support = dominant_support(l1, l2);
  if (c.support.empty()) return c;
  std::map<std::pair<long, long>, std::size_t> index;
  for (std::size_t i = 0; i < c.support.size(); ++i) index[{c.support[i].m1, c.support[i].m2}] = i;
  for (std::size_t i = 0; i < c.support.size(); ++i) {
    const SupportPoint& p = c.support[i];
    for (Case k : kAllCases) {
      if (k == Case::Four && (p.nu1 != 1 || p.nu2 != 1)) continue;
      auto [d1, d2] = case_shift(k);
      auto it = index.find({p.m1 + d1, p.m2 + d2});
      if (it == index.end()) continue;
      Rational s;
      if (mode == ParamMode::Symbolic) {
        const CaseScalar& cs = case_scalar(k);
        if (!cs.ok) throw Error("case " + case_label(k) + " did not produce a multiple of the target");
        s = evaluate_scalar(cs.scalar, l1, l2, p.m1, p.m2);
      } else {
        CaseScalar cs = case_scalar_at(k, l1, l2, p.m1, p.m2);
        if (!cs.ok) throw Error("case " + case_label(k) + " did not produce a multiple of the target");
        s = *cs.scalar.constant_value();
      }
      if (sgn(s) == 0) continue;
      c.edges.push_back({i, it->second, k, s});
    }
  }
  c.basepoint = 0;
  Graph g(c);
  std::vector<bool> bad(c.support.size());
  for (std::size_t i = 1; i < c.support.size(); ++i) {
    auto p = g.path(i, 0);
    if (p) c.paths.push_back({i, 0, *p});
    else bad[i] = true;
  }
  for (std::size_t i = 1; i < c.support.size(); ++i) {
    auto p = g.path(0, i);
    if (p) c.paths.push_back({0, i, *p});
    else bad[i] = true;
  }
  for (std::size_t i = 0; i < bad.size(); ++i)
    if (bad[i]) c.unreachable.push_back(i);
  return c;
}

namespace {

// Closed forms in exact integer arithmetic, kept apart from the RatFunc
// versions so the checker does not share code with the engine.
Rational direct_scalar(Case c, long l1, long l2, long m1, long m2) {
  const Rational n1 = l2 - 2 * m1 + m2, n2 = l1 + m1 - 2 * m2, a = m1, b = m2;
  switch (c) {
    case Case::One: return a * b;
    case Case::TwoA: return Rational(-1, 3) * a * n2 * (b + n2 + 1);
    case Case::TwoB: return Rational(-1, 3) * b * n1 * (a + n1 + 1);
    case Case::ThreeA:
      return Rational(-2, 243) * (n2 + 3) * (n1 + a + 1) * (n1 + n2 + 1) * (n1 + n2 + b + 2) * (2 * n1 + n2 + 3) * n1 *
             (n1 - 1);
    case Case::ThreeB:
      return Rational(-2, 243) * (n1 + 3) * (n2 + b + 1) * (n1 + n2 + 1) * (n1 + n2 + a + 2) * (n1 + 2 * n2 + 3) * n2 *
             (n2 - 1);
    case Case::Four: return Rational(-2, 3) * (a + 4) * (b + 4);
  }
  return 0;
}

}  // namespace

CheckOutcome check_certificate(const Certificate& c) {
  CheckOutcome out;
  auto fail = [&](std::string s) {
    out.ok = false;
    out.problems.push_back(std::move(s));
  };
  // Support by brute force over a box that contains every dominant point.
  std::vector<std::pair<long, long>> expected;
  const long box = 2 * (std::labs(c.l1) + std::labs(c.l2)) + 2;
  for (long m1 = 0; m1 <= box; ++m1)
    for (long m2 = 0; m2 <= box; ++m2)
      if (c.l2 - 2 * m1 + m2 >= 0 && c.l1 + m1 - 2 * m2 >= 0) expected.emplace_back(m1, m2);
  std::vector<std::pair<long, long>> got;
  for (const auto& p : c.support) {
    got.emplace_back(p.m1, p.m2);
    if (p.nu1 != c.l2 - 2 * p.m1 + p.m2 || p.nu2 != c.l1 + p.m1 - 2 * p.m2) fail("wrong weight at a support point");
  }
  std::sort(got.begin(), got.end());
  if (got != expected) fail("support differs from enumeration");
  if (c.zero()) {
    if (!c.edges.empty() || !c.paths.empty()) fail("zero certificate carries edges");
    return out;
  }
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const Edge& x = c.edges[e];
    if (x.from >= c.support.size() || x.to >= c.support.size()) {
      fail("edge " + std::to_string(e) + " leaves the support");
      continue;
    }
    const SupportPoint &p = c.support[x.from], &q = c.support[x.to];
    auto [d1, d2] = case_shift(x.label);
    if (q.m1 - p.m1 != d1 || q.m2 - p.m2 != d2) fail("edge " + std::to_string(e) + " has the wrong shift");
    if (x.label == Case::Four && (p.nu1 != 1 || p.nu2 != 1)) fail("case 4 edge away from rho");
    if (sgn(x.scalar) == 0) fail("edge " + std::to_string(e) + " has a zero scalar");
    if (x.scalar != direct_scalar(x.label, c.l1, c.l2, p.m1, p.m2))
      fail("edge " + std::to_string(e) + " scalar disagrees with the closed form");
  }
  if (!c.basepoint || *c.basepoint >= c.support.size()) {
    fail("missing basepoint");
    return out;
  }
  const std::size_t base = *c.basepoint;
  std::vector<bool> to_base(c.support.size()), from_base(c.support.size());
  to_base[base] = from_base[base] = true;
  for (const auto& path : c.paths) {
    std::size_t at = path.from;
    bool valid = true;
    for (std::size_t e : path.edges) {
      if (e >= c.edges.size() || c.edges[e].from != at) {
        valid = false;
        break;
      }
      at = c.edges[e].to;
    }
    if (!valid || at != path.to) {
      fail("broken path from " + std::to_string(path.from) + " to " + std::to_string(path.to));
      continue;
    }
    if (path.to == base) to_base[path.from] = true;
    if (path.from == base) from_base[path.to] = true;
  }
  for (std::size_t i = 0; i < c.support.size(); ++i)
    if (!to_base[i] || !from_base[i]) {
      if (std::find(c.unreachable.begin(), c.unreachable.end(), i) == c.unreachable.end())
        fail("point " + std::to_string(i) + " lacks a path and is not listed as unreachable");
    }
  if (!c.unreachable.empty()) fail("certificate lists unreachable points");
  return out;
}

std::string transcript(const Certificate& c) {
  std::ostringstream os;
  os << "lambda = (" << c.l1 << ", " << c.l2 << ")\n";
  if (c.zero()) {
    os << "support is empty: the module of sections is zero\n";
    return os.str();
  }
  auto name = [&](std::size_t i) {
    const SupportPoint& p = c.support[i];
    return "m=(" + std::to_string(p.m1) + "," + std::to_string(p.m2) + ") nu=(" + std::to_string(p.nu1) + "," +
           std::to_string(p.nu2) + ")";
  };
  os << "support (" << c.support.size() << " points, dimension " << module_dimension(c.l1, c.l2) << "):\n";
  for (std::size_t i = 0; i < c.support.size(); ++i) os << "  [" << i << "] " << name(i) << "\n";
  os << "moves:\n";
  for (const auto& e : c.edges)
    os << "  case " << case_label(e.label) << ": " << name(e.from) << " -> " << name(e.to)
       << "  scalar " << format_rational(e.scalar) << "\n";
  os << "basepoint " << name(*c.basepoint) << "\n";
  for (const auto& p : c.paths) {
    os << "  " << p.from << " -> " << p.to << ":";
    for (std::size_t e : p.edges) os << " " << case_label(c.edges[e].label);
    if (p.edges.empty()) os << " (stay)";
    os << "\n";
  }
  for (std::size_t i : c.unreachable) os << "unreachable: " << name(i) << "\n";
  os << "status: " << c.status() << "\n";
  return os.str();
}

}  // namespace dlambda::cert
