#include "dlambda/ratfunc.hpp"

#include <algorithm>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

Monomial mono_pow(const Monomial& m, unsigned e) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVariables; ++i)
    if (m[i]) r.set(i, m[i] * e);
  return r;
}

Rational rat_pow(const Rational& c, unsigned e) {
  Rational r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(c.get_mpq_t()), e);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(c.get_mpq_t()), e);
  return r;
}

bool same_den(const Denominator& a, const Denominator& b) {
  if (a.mono != b.mono || a.factors.size() != b.factors.size()) return false;
  for (std::size_t i = 0; i < a.factors.size(); ++i)
    if (a.factors[i].exp != b.factors[i].exp || a.factors[i].base != b.factors[i].base) return false;
  return true;
}

void insert_factor(Denominator& d, const Poly& base, unsigned e) {
  if (e == 0) return;
  auto it = std::lower_bound(d.factors.begin(), d.factors.end(), base,
                             [](const Denominator::Factor& f, const Poly& b) { return f.base.compare(b) < 0; });
  if (it != d.factors.end() && it->base.compare(base) == 0) {
    it->exp += e;
  } else {
    d.factors.insert(it, Denominator::Factor{base, e});
  }
}

// Strips as many copies of b from r as divide it exactly.
unsigned strip(Poly& r, const Poly& b) {
  unsigned k = 0;
  while (!r.is_constant()) {
    auto q = r.divide_exact(b);
    if (!q) break;
    r = std::move(*q);
    ++k;
  }
  return k;
}

// Multiplies d by r^e, reusing bases already present in d or in `hints`.
// The constant part of r^e is multiplied into `scale`.
void absorb(Poly r, unsigned e, Denominator& d, Rational& scale, const std::vector<const Poly*>& hints = {}) {
  if (r.is_zero()) throw DivisionByZero("denominator is the zero polynomial");
  if (e == 0) return;
  Monomial mc = r.monomial_content();
  if (!mc.is_one()) {
    d.mono = d.mono * mono_pow(mc, e);
    r = r.divide_monomial(mc);
  }
  if (!r.is_constant()) {
    for (auto& f : d.factors) {
      if (r.is_constant()) break;
      f.exp += strip(r, f.base) * e;
    }
    for (const Poly* h : hints) {
      if (r.is_constant()) break;
      if (unsigned k = strip(r, *h)) insert_factor(d, *h, k * e);
    }
  }
  if (r.is_constant()) {
    scale *= rat_pow(*r.constant_value(), e);
    return;
  }
  Rational lc = r.leading().second;
  if (lc != 1) {
    r = r * Rational(1 / lc);
    scale *= rat_pow(lc, e);
  }
  insert_factor(d, r, e);
}

Denominator den_mul(const Denominator& a, const Denominator& b) {
  Denominator r = a;
  r.mono = a.mono * b.mono;
  for (const auto& f : b.factors) insert_factor(r, f.base, f.exp);
  return r;
}

Denominator den_lcm(const Denominator& a, const Denominator& b) {
  Denominator r = a;
  r.mono = Monomial::max(a.mono, b.mono);
  for (const auto& f : b.factors) {
    auto it = std::find_if(r.factors.begin(), r.factors.end(), [&](const auto& x) { return x.base == f.base; });
    if (it == r.factors.end()) {
      insert_factor(r, f.base, f.exp);
    } else {
      it->exp = std::max(it->exp, f.exp);
    }
  }
  return r;
}

// L / D as a polynomial; D must divide L factorwise.
Poly den_cofactor(const Denominator& L, const Denominator& D, const VarTablePtr& vars) {
  Poly r = Poly::monomial(vars, L.mono / D.mono);
  for (const auto& f : L.factors) {
    unsigned have = 0;
    for (const auto& g : D.factors)
      if (g.base == f.base) have = g.exp;
    if (f.exp > have) r = r * f.base.pow(f.exp - have);
  }
  return r;
}

std::vector<const Poly*> bases_of(const Denominator& a, const Denominator* b = nullptr) {
  std::vector<const Poly*> out;
  for (const auto& f : a.factors) out.push_back(&f.base);
  if (b)
    for (const auto& f : b->factors) out.push_back(&f.base);
  return out;
}

}  // namespace

Poly Denominator::expand(const VarTablePtr& vars) const {
  Poly r = Poly::monomial(vars, mono);
  for (const auto& f : factors) r = r * f.base.pow(f.exp);
  return r;
}

RatFunc make_ratfunc(Poly num, Denominator den) {
  RatFunc r;
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  r.normalize();
  return r;
}

RatFunc::RatFunc(Poly num) : num_(std::move(num)) {}

RatFunc::RatFunc(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw DivisionByZero("fraction with zero denominator");
  Rational scale = 1;
  absorb(den, 1, den_, scale);
  VarTablePtr v = num.vars() ? num.vars() : den.vars();
  num_ = (num * Rational(1 / scale));
  if (!num_.vars()) num_ = Poly(v);
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Denominator{};
    return;
  }
  if (!den_.mono.is_one()) {
    Monomial g = Monomial::min(num_.monomial_content(), den_.mono);
    if (!g.is_one()) {
      num_ = num_.divide_monomial(g);
      den_.mono = den_.mono / g;
    }
  }
  for (auto& f : den_.factors) {
    while (f.exp > 0) {
      auto q = num_.divide_exact(f.base);
      if (!q) break;
      num_ = std::move(*q);
      --f.exp;
    }
  }
  std::erase_if(den_.factors, [](const Denominator::Factor& f) { return f.exp == 0; });
  if (!den_.mono.is_one()) {
    Monomial g = Monomial::min(num_.monomial_content(), den_.mono);
    if (!g.is_one()) {
      num_ = num_.divide_monomial(g);
      den_.mono = den_.mono / g;
    }
  }
}

std::optional<Poly> RatFunc::as_poly() const {
  if (den_.is_one()) return num_;
  if (!den_.factors.empty()) return std::nullopt;  // normalize already tried every base
  if (!den_.mono.divides(num_.monomial_content())) return std::nullopt;
  return num_.divide_monomial(den_.mono);
}

std::optional<Rational> RatFunc::constant_value() const {
  if (!den_.is_one()) return std::nullopt;
  return num_.constant_value();
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -num_;
  return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (!compatible(vars(), o.vars())) throw VarTableMismatch();
  if (o.is_zero() && (vars() || !o.vars())) return *this;
  if (is_zero() && (o.vars() || !vars())) return o;
  if (same_den(den_, o.den_)) return make_ratfunc(num_ + o.num_, den_);
  Denominator L = den_lcm(den_, o.den_);
  VarTablePtr v = vars() ? vars() : o.vars();
  Poly n = num_ * den_cofactor(L, den_, v) + o.num_ * den_cofactor(L, o.den_, v);
  return make_ratfunc(std::move(n), std::move(L));
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  Poly n = num_ * o.num_;
  if (n.is_zero()) return RatFunc(n);
  return make_ratfunc(std::move(n), den_mul(den_, o.den_));
}

RatFunc RatFunc::operator*(const Rational& c) const {
  RatFunc r = *this;
  r.num_ = num_ * c;
  if (r.num_.is_zero()) r.den_ = Denominator{};
  return r;
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw DivisionByZero("division by the zero fraction");
  Denominator d = den_;
  Rational scale = 1;
  absorb(o.num_, 1, d, scale, bases_of(o.den_));
  Poly n = num_ * o.den_.expand(o.vars()) * Rational(1 / scale);
  return make_ratfunc(std::move(n), std::move(d));
}

RatFunc RatFunc::inverse() const { return RatFunc::constant(vars(), 1) / *this; }

RatFunc RatFunc::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  unsigned e = static_cast<unsigned>(n);
  if (e == 0) return RatFunc::constant(vars(), 1);
  Denominator d;
  d.mono = mono_pow(den_.mono, e);
  for (const auto& f : den_.factors) d.factors.push_back({f.base, f.exp * e});
  RatFunc r;
  r.num_ = num_.pow(e);
  r.den_ = std::move(d);
  return r;
}

RatFunc RatFunc::derivative(std::size_t var) const {
  const VarTablePtr& v = vars();
  if (is_zero()) return *this;
  if (den_.is_one()) return RatFunc(num_.derivative(var));
  // d(n/D) = (n' R - n sum_k e_k b_k' R/b_k) / (D R), R = product of the bases involving var.
  std::vector<std::size_t> dep;
  for (std::size_t k = 0; k < den_.factors.size(); ++k)
    if (den_.factors[k].base.depends_on(var)) dep.push_back(k);
  unsigned mv = den_.mono[var];
  std::vector<Poly> others(dep.size(), Poly::constant(v, 1));
  Poly R = Poly::constant(v, 1);
  for (std::size_t a = 0; a < dep.size(); ++a) {
    R = R * den_.factors[dep[a]].base;
    for (std::size_t b = 0; b < dep.size(); ++b)
      if (a != b) others[b] = others[b] * den_.factors[dep[a]].base;
  }
  Poly xv = mv ? Poly::variable(v, var) : Poly::constant(v, 1);
  Poly logd(v);
  for (std::size_t a = 0; a < dep.size(); ++a) {
    const auto& f = den_.factors[dep[a]];
    logd += f.base.derivative(var) * others[a] * Rational(f.exp);
  }
  logd = logd * xv;
  if (mv) logd += R * Rational(mv);
  Poly n = num_.derivative(var) * R * xv - num_ * logd;
  Denominator d = den_;
  if (mv) d.mono.set(var, mv + 1);
  for (std::size_t k : dep) d.factors[k].exp += 1;
  return make_ratfunc(std::move(n), std::move(d));
}

bool RatFunc::equals(const RatFunc& o) const {
  if (!compatible(vars(), o.vars())) throw VarTableMismatch();
  if (same_den(den_, o.den_)) return num_ == o.num_;
  if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
  Denominator L = den_lcm(den_, o.den_);
  VarTablePtr v = vars() ? vars() : o.vars();
  return num_ * den_cofactor(L, den_, v) == o.num_ * den_cofactor(L, o.den_, v);
}

Rational RatFunc::evaluate(std::span<const Rational> values) const {
  Rational d = Poly::monomial(vars(), den_.mono).evaluate(values);
  for (const auto& f : den_.factors) d *= rat_pow(f.base.evaluate(values), f.exp);
  if (sgn(d) == 0) throw DivisionByZero("denominator vanishes at the evaluation point");
  return num_.evaluate(values) / d;
}

RatFunc RatFunc::partial_evaluate(const std::map<std::size_t, Rational>& values) const {
  Poly n = num_.partial_evaluate(values);
  Denominator d;
  Rational scale = 1;
  absorb(Poly::monomial(vars(), den_.mono).partial_evaluate(values), 1, d, scale);
  for (const auto& f : den_.factors) absorb(f.base.partial_evaluate(values), f.exp, d, scale, bases_of(den_));
  return make_ratfunc(n * Rational(1 / scale), std::move(d));
}

bool RatFunc::depends_on(std::size_t var) const {
  if (num_.depends_on(var) || den_.mono[var]) return true;
  return std::any_of(den_.factors.begin(), den_.factors.end(), [&](const auto& f) { return f.base.depends_on(var); });
}

bool RatFunc::coordinate_free() const {
  if (!vars()) return true;
  for (std::size_t i = 0; i < vars()->coordinate_count(); ++i)
    if (depends_on(i)) return false;
  return true;
}

RatFunc RatFunc::rebase(const VarTablePtr& target) const {
  RatFunc r;
  r.num_ = dlambda::rebase(num_, target);
  Poly m = dlambda::rebase(Poly::monomial(vars(), den_.mono), target);
  r.den_.mono = m.leading().first;
  for (const auto& f : den_.factors) r.den_.factors.push_back({dlambda::rebase(f.base, target), f.exp});
  std::sort(r.den_.factors.begin(), r.den_.factors.end(),
            [](const auto& a, const auto& b) { return a.base.compare(b.base) < 0; });
  return r;
}

RatFunc differentiate(const RatFunc& f, std::string_view var) {
  if (!f.vars()) return f;
  std::size_t i = f.vars()->index(var);
  if (f.vars()->is_parameter(i)) throw NotACoordinate(std::string(var));
  return f.derivative(i);
}

Substitution Substitution::make(VarTablePtr source, VarTablePtr target, const std::map<std::string, RatFunc>& map) {
  Substitution s{source, target, {}};
  s.images.resize(source->size());
  for (const auto& [name, img] : map) {
    std::size_t i = source->index(name);
    if (!compatible(img.vars(), target)) throw VarTableMismatch();
    s.images[i] = img.vars() ? img : RatFunc(Poly(target)) + img;
  }
  for (std::size_t i = 0; i < source->size(); ++i) {
    if (s.images[i]) continue;
    if (target->find(source->name(i))) s.images[i] = RatFunc::variable(target, source->name(i));
  }
  return s;
}

Substitution Substitution::identity(VarTablePtr vars) { return make(vars, vars, {}); }

namespace {

class PolySubstituter {
 public:
  explicit PolySubstituter(const Substitution& s) : s_(s), powers_(s.images.size()) {}

  RatFunc operator()(const Poly& p) {
    if (p.is_zero()) return RatFunc(Poly(s_.target));
    struct Piece {
      Rational coeff;
      Poly num;
      Denominator den;
    };
    std::vector<Piece> pieces;
    pieces.reserve(p.size());
    for (const auto& [m, c] : p.terms()) {
      Piece piece{c, Poly::constant(s_.target, 1), Denominator{}};
      for (std::size_t i = 0; i < s_.images.size(); ++i) {
        if (!m[i]) continue;
        const RatFunc& q = power(i, m[i]);
        piece.num = piece.num * q.num();
        piece.den = den_mul(piece.den, q.den_factored());
      }
      pieces.push_back(std::move(piece));
    }
    Denominator L;
    for (const auto& pc : pieces) L = den_lcm(L, pc.den);
    std::vector<std::pair<Denominator, Poly>> cof_cache;
    std::vector<Poly::Term> acc;
    Poly sum(s_.target);
    for (const auto& pc : pieces) {
      const Poly* cof = nullptr;
      for (const auto& [d, c] : cof_cache)
        if (same_den(d, pc.den)) cof = &c;
      if (!cof) {
        cof_cache.emplace_back(pc.den, den_cofactor(L, pc.den, s_.target));
        cof = &cof_cache.back().second;
      }
      Poly t = pc.num * *cof * pc.coeff;
      for (auto& term : t.terms()) acc.push_back(term);
      if (acc.size() > 50000) {
        sum += Poly::from_terms(s_.target, std::move(acc));
        acc.clear();
      }
    }
    sum += Poly::from_terms(s_.target, std::move(acc));
    return make_ratfunc(std::move(sum), std::move(L));
  }

 private:
  const RatFunc& power(std::size_t var, unsigned e) {
    auto& pw = powers_[var];
    if (pw.empty()) {
      if (!s_.images[var]) throw Error("substitution has no image for '" + s_.source->name(var) + "'");
      pw.push_back(RatFunc::constant(s_.target, 1));
    }
    while (pw.size() <= e) pw.push_back(pw.back() * *s_.images[var]);
    return pw[e];
  }

  const Substitution& s_;
  std::vector<std::vector<RatFunc>> powers_;
};

}  // namespace

RatFunc substitute(const RatFunc& f, const Substitution& s) {
  if (!compatible(f.vars(), s.source)) throw VarTableMismatch();
  PolySubstituter sub(s);
  RatFunc r = sub(f.num());
  if (r.is_zero()) return r;
  const Denominator& d = f.den_factored();
  if (!d.mono.is_one()) {
    RatFunc m = sub(Poly::monomial(s.source, d.mono));
    if (m.is_zero()) throw DivisionByZero("substituted denominator vanishes identically");
    r = r / m;
  }
  for (const auto& fac : d.factors) {
    RatFunc b = sub(fac.base);
    if (b.is_zero()) throw DivisionByZero("substituted denominator vanishes identically");
    r = r / b.pow(static_cast<int>(fac.exp));
  }
  return r;
}

Poly substitute_poly_to_poly(const Poly& p, const std::vector<Poly>& images, const VarTablePtr& target) {
  std::vector<std::vector<Poly>> powers(images.size());
  std::vector<Poly::Term> acc;
  for (const auto& [m, c] : p.terms()) {
    Poly t = Poly::constant(target, c);
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (!m[i]) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(Poly::constant(target, 1));
      while (pw.size() <= m[i]) pw.push_back(pw.back() * images[i]);
      t = t * pw[m[i]];
    }
    for (const auto& term : t.terms()) acc.push_back(term);
  }
  return Poly::from_terms(target, std::move(acc));
}

Rational evaluate(const RatFunc& f, const std::map<std::string, Rational>& point,
                  const std::map<std::string, Rational>& params) {
  if (!f.vars()) return f.constant_value().value_or(Rational(0));
  const VarTable& t = *f.vars();
  std::vector<Rational> values(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& table = t.is_parameter(i) ? params : point;
    auto it = table.find(t.name(i));
    if (it != table.end()) {
      values[i] = it->second;
    } else if (f.depends_on(i)) {
      throw Error("no value given for '" + t.name(i) + "'");
    }
  }
  return f.evaluate(values);
}

RatFunc rf_sum(const std::vector<RatFunc>& terms, const VarTablePtr& vars) {
  std::vector<const RatFunc*> live;
  for (const auto& t : terms)
    if (!t.is_zero()) live.push_back(&t);
  if (live.empty()) return RatFunc(Poly(vars));
  if (live.size() == 1) return *live[0];
  Denominator L;
  for (const RatFunc* t : live) L = den_lcm(L, t->den_factored());
  std::vector<std::pair<Denominator, Poly>> cof_cache;
  std::vector<Poly::Term> acc;
  for (const RatFunc* t : live) {
    const Poly* cof = nullptr;
    for (const auto& [d, c] : cof_cache)
      if (same_den(d, t->den_factored())) cof = &c;
    if (!cof) {
      cof_cache.emplace_back(t->den_factored(), den_cofactor(L, t->den_factored(), vars));
      cof = &cof_cache.back().second;
    }
    if (cof->is_one()) {
      for (const auto& term : t->num().terms()) acc.push_back(term);
    } else {
      Poly p = t->num() * *cof;
      for (const auto& term : p.terms()) acc.push_back(term);
    }
  }
  return make_ratfunc(Poly::from_terms(vars, std::move(acc)), std::move(L));
}

RatFunc rf_arith(RatOp op, const RatFunc& f, const RatFunc& g) {
  switch (op) {
    case RatOp::Add:
      return f + g;
    case RatOp::Mul:
      return f * g;
    case RatOp::Div:
      return f / g;
    case RatOp::Neg:
      return -f;
  }
  throw Error("unknown fraction operation");
}

}  // namespace dlambda
