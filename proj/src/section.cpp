#include "dlambda/section.hpp"

#include <unordered_map>

#include "dlambda/errors.hpp"

namespace dlambda {

AffineExpr::AffineExpr(Poly p) : p_(std::move(p)) {
  for (const auto& [m, c] : p_.terms()) {
    if (m.degree() > 1) throw PreconditionError("exponent is not affine in the parameters");
    for (std::size_t i = 0; p_.vars() && i < p_.vars()->coordinate_count(); ++i)
      if (m[i]) throw PreconditionError("exponent mentions coordinate '" + p_.vars()->name(i) + "'");
  }
}

AffineExpr AffineExpr::parameter(VarTablePtr vars, std::string_view name) {
  return AffineExpr(Poly::variable(std::move(vars), name));
}

std::optional<long> AffineExpr::integer_value() const {
  auto c = constant_value();
  if (!c || c->get_den() != 1 || !c->get_num().fits_slong_p()) return std::nullopt;
  return c->get_num().get_si();
}

PowerSection::PowerSection(RatFunc prefactor, std::vector<PowerFactor> factors) : prefactor_(std::move(prefactor)) {
  for (auto& f : factors) {
    if (f.base.is_zero()) throw DivisionByZero("power section with a zero base");
    if (f.exponent.poly().is_zero()) continue;
    bool merged = false;
    for (auto& g : factors_) {
      if (g.base == f.base) {
        g.exponent = g.exponent + f.exponent;
        merged = true;
        break;
      }
    }
    if (!merged) factors_.push_back(std::move(f));
  }
  std::erase_if(factors_, [](const PowerFactor& f) { return f.exponent.poly().is_zero(); });
  if (prefactor_.is_zero()) factors_.clear();
}

AffineExpr PowerSection::exponent_of(const Poly& base) const {
  for (const auto& f : factors_)
    if (f.base == base) return f.exponent;
  return AffineExpr(vars(), 0);
}

PowerSection PowerSection::operator*(const RatFunc& f) const { return PowerSection(prefactor_ * f, factors_); }

PowerSection PowerSection::operator*(const PowerSection& o) const {
  std::vector<PowerFactor> fs = factors_;
  fs.insert(fs.end(), o.factors_.begin(), o.factors_.end());
  return PowerSection(prefactor_ * o.prefactor_, std::move(fs));
}

PowerSection PowerSection::inverse() const {
  std::vector<PowerFactor> fs;
  for (const auto& f : factors_) fs.push_back({f.base, -f.exponent});
  return PowerSection(prefactor_.inverse(), std::move(fs));
}

PowerSection PowerSection::with_prefactor(RatFunc p) const { return PowerSection(std::move(p), factors_); }

PowerSection PowerSection::normalized() const {
  if (is_zero()) return *this;
  RatFunc p = prefactor_;
  std::vector<PowerFactor> fs = factors_;
  for (auto& f : fs) {
    long moved = 0;
    Poly num = p.num();
    Denominator den = p.den_factored();
    while (!num.is_constant()) {
      auto q = num.divide_exact(f.base);
      if (!q) break;
      num = std::move(*q);
      ++moved;
    }
    Rational scale = 1;
    const Rational lc = f.base.leading().second;
    if (f.base.is_monomial()) {
      const Monomial& m = f.base.leading().first;
      while (!m.is_one() && m.divides(den.mono)) {
        den.mono = den.mono / m;
        scale *= lc;
        --moved;
      }
    } else {
      Poly monic = f.base * Rational(1 / lc);
      for (auto it = den.factors.begin(); it != den.factors.end(); ++it) {
        if (it->base != monic) continue;
        for (unsigned k = 0; k < it->exp; ++k) scale *= lc;
        moved -= static_cast<long>(it->exp);
        den.factors.erase(it);
        break;
      }
    }
    if (moved) {
      p = make_ratfunc(num * scale, std::move(den));
      f.exponent = f.exponent + moved;
    }
  }
  return PowerSection(std::move(p), std::move(fs));
}

PowerSection PowerSection::specialize(const std::map<std::size_t, Rational>& params) const {
  std::vector<PowerFactor> fs;
  for (const auto& f : factors_) fs.push_back({f.base.partial_evaluate(params), f.exponent.partial_evaluate(params)});
  return PowerSection(prefactor_.partial_evaluate(params), std::move(fs));
}

std::optional<RatFunc> PowerSection::to_ratfunc() const {
  RatFunc r = prefactor_;
  for (const auto& f : factors_) {
    auto k = f.exponent.integer_value();
    if (!k) return std::nullopt;
    r = r * RatFunc(f.base).pow(static_cast<int>(*k));
  }
  return r;
}

namespace {

// Memoized products of the commuting operators T_v = d_v + L_v.
class ShiftedPartials {
 public:
  ShiftedPartials(const ChartPtr& chart, std::vector<DiffOp> t) : chart_(chart), t_(std::move(t)) {
    memo_.emplace(Monomial(), DiffOp::scalar(chart, RatFunc::constant(chart->vars, 1)));
  }

  const DiffOp& get(const Monomial& a) {
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    std::size_t v = 0;
    while (a[v] == 0) ++v;
    Monomial prev = a;
    prev.set(v, a[v] - 1);
    DiffOp r = op_compose(t_[v], get(prev));
    return memo_.emplace(a, std::move(r)).first->second;
  }

 private:
  ChartPtr chart_;
  std::vector<DiffOp> t_;
  std::unordered_map<Monomial, DiffOp, MonomialHash> memo_;
};

}  // namespace

DiffOp conjugate(const DiffOp& a, const PowerSection& s) {
  if (s.is_zero()) throw DivisionByZero("conjugation by the zero section");
  if (s.vars() && !compatible(s.vars(), a.vars())) throw VarTableMismatch();
  const ChartPtr& chart = a.chart();
  const VarTablePtr& v = chart->vars;
  std::vector<DiffOp> t(v->coordinate_count());
  RatFunc p = s.prefactor().vars() ? s.prefactor() : RatFunc(Poly(v)) + s.prefactor();
  for (std::size_t i = 0; i < v->coordinate_count(); ++i) {
    std::vector<RatFunc> parts;
    RatFunc dp = p.derivative(i);
    if (!dp.is_zero()) parts.push_back(dp / p);
    for (const auto& f : s.factors()) {
      Poly db = f.base.derivative(i);
      if (db.is_zero()) continue;
      parts.push_back(RatFunc(db * rebase(f.exponent.poly(), v), f.base));
    }
    DiffOp ti = DiffOp::partial(chart, i);
    ti.add_term(Monomial(), rf_sum(parts, v));
    t[i] = std::move(ti);
  }
  ShiftedPartials sp(chart, std::move(t));
  std::map<Monomial, std::vector<RatFunc>, DegLexDescending> acc;
  for (const auto& [alpha, c] : a.terms()) {
    const DiffOp& prod = sp.get(alpha);
    for (const auto& [beta, d] : prod.terms()) acc[beta].push_back(c * d);
  }
  DiffOp r(chart);
  for (auto& [idx, parts] : acc) r.add_term(idx, rf_sum(parts, v));
  return r;
}

PowerSection op_apply_section(const DiffOp& a, const PowerSection& s) {
  PowerSection bare(RatFunc::constant(a.vars(), 1), s.factors());
  DiffOp c = conjugate(a, bare);
  RatFunc p = s.prefactor().vars() ? s.prefactor() : RatFunc(Poly(a.vars())) + s.prefactor();
  return PowerSection(op_apply(c, p), s.factors()).normalized();
}

MultipleResult express_as_multiple(const PowerSection& s, const PowerSection& t) {
  if (t.is_zero()) throw DivisionByZero("express_as_multiple against the zero section");
  const VarTablePtr& v = t.vars();
  MultipleResult out;
  if (s.is_zero()) {
    out.ok = true;
    out.scalar = RatFunc(Poly(v));
    return out;
  }
  PowerSection q = s * t.inverse();
  RatFunc ratio = q.prefactor();
  std::vector<PowerFactor> symbolic;
  for (const auto& f : q.factors()) {
    auto k = f.exponent.integer_value();
    if (!k) {
      symbolic.push_back(f);
      continue;
    }
    ratio = ratio * RatFunc(f.base).pow(static_cast<int>(*k));
  }
  out.residual = PowerSection(ratio, symbolic);
  if (!symbolic.empty()) return out;
  for (std::size_t i = 0; i < v->coordinate_count(); ++i) {
    if (!ratio.depends_on(i)) continue;
    if (!ratio.derivative(i).is_zero()) return out;
  }
  // Constant in every coordinate: read it off at a point where it is defined.
  for (long shift = 0; shift < 64; ++shift) {
    std::map<std::size_t, Rational> pt;
    for (std::size_t i = 0; i < v->coordinate_count(); ++i) {
      pt[i] = Rational(long(2 + 3 * i + 7 * shift), long(1 + i % 3));
      pt[i].canonicalize();
    }
    try {
      out.scalar = ratio.partial_evaluate(pt);
      out.ok = true;
      return out;
    } catch (const DivisionByZero&) {
    }
  }
  throw Error("could not find a regular point to read off the scalar");
}

}  // namespace dlambda
