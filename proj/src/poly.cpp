#include "dlambda/poly.hpp"

#include <algorithm>
#include <unordered_map>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

bool term_desc(const Poly::Term& a, const Poly::Term& b) { return a.first.compare(b.first) > 0; }

// Merge of two sorted term lists; sign = +1 or -1 applied to b.
std::vector<Poly::Term> merge_terms(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b, int sign) {
  std::vector<Poly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = a[i].first.compare(b[j].first);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.emplace_back(b[j].first, sign > 0 ? b[j].second : Rational(-b[j].second));
      ++j;
    } else {
      Rational s = sign > 0 ? Rational(a[i].second + b[j].second) : Rational(a[i].second - b[j].second);
      if (sgn(s) != 0) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.emplace_back(b[j].first, sign > 0 ? b[j].second : Rational(-b[j].second));
  return out;
}

}  // namespace

VarTablePtr Poly::merge_vars(const Poly& a, const Poly& b) {
  if (!compatible(a.vars_, b.vars_)) throw VarTableMismatch();
  return a.vars_ ? a.vars_ : b.vars_;
}

Poly Poly::constant(VarTablePtr vars, const Rational& c) {
  Poly p(std::move(vars));
  if (sgn(c) != 0) p.terms_.emplace_back(Monomial(), c);
  return p;
}

Poly Poly::variable(VarTablePtr vars, std::size_t index) {
  if (!vars || index >= vars->size()) throw Error("variable index out of range");
  Poly p(std::move(vars));
  p.terms_.emplace_back(Monomial::unit(index), Rational(1));
  return p;
}

Poly Poly::variable(VarTablePtr vars, std::string_view name) {
  std::size_t i = vars->index(name);
  return variable(std::move(vars), i);
}

Poly Poly::monomial(VarTablePtr vars, const Monomial& m, const Rational& c) {
  Poly p(std::move(vars));
  if (sgn(c) != 0) p.terms_.emplace_back(m, c);
  return p;
}

Poly Poly::from_terms(VarTablePtr vars, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_desc);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      if (!out.empty() && sgn(out.back().second) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().second) == 0) out.pop_back();
  return Poly(std::move(vars), std::move(out));
}

bool Poly::is_one() const { return terms_.size() == 1 && terms_[0].first.is_one() && terms_[0].second == 1; }

std::optional<Rational> Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].first.is_one()) return terms_[0].second;
  return std::nullopt;
}

Poly Poly::operator-() const {
  Poly r(vars_, terms_);
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  auto v = merge_vars(*this, o);
  return Poly(v, merge_terms(terms_, o.terms_, +1));
}

Poly Poly::operator-(const Poly& o) const {
  auto v = merge_vars(*this, o);
  return Poly(v, merge_terms(terms_, o.terms_, -1));
}

Poly Poly::mul_monomial(const Monomial& m, const Rational& c) const {
  if (sgn(c) == 0) return Poly(vars_);
  Poly r(vars_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.emplace_back(t.first * m, t.second * c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  auto v = merge_vars(*this, o);
  if (is_zero() || o.is_zero()) return Poly(v);
  if (terms_.size() == 1) return Poly(v, o.mul_monomial(terms_[0].first, terms_[0].second).terms_);
  if (o.terms_.size() == 1) return Poly(v, mul_monomial(o.terms_[0].first, o.terms_[0].second).terms_);

  const std::size_t n = terms_.size() * o.terms_.size();
  if (n <= 4096) {
    std::vector<Term> acc;
    acc.reserve(n);
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) acc.emplace_back(a.first * b.first, a.second * b.second);
    return from_terms(v, std::move(acc));
  }
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(n / 2);
  Rational prod;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      mpq_mul(prod.get_mpq_t(), a.second.get_mpq_t(), b.second.get_mpq_t());
      auto [it, fresh] = acc.try_emplace(a.first * b.first, prod);
      if (!fresh) it->second += prod;
    }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (sgn(c) != 0) out.emplace_back(m, std::move(c));
  std::sort(out.begin(), out.end(), term_desc);
  return Poly(v, std::move(out));
}

Poly Poly::operator*(const Rational& c) const {
  if (sgn(c) == 0) return Poly(vars_);
  Poly r(vars_, terms_);
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

Poly Poly::pow(unsigned n) const {
  Poly result = constant(vars_, 1);
  Poly base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Poly Poly::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    unsigned e = m[var];
    if (e == 0) continue;
    Monomial d = m;
    d.set(var, e - 1);
    out.emplace_back(d, c * e);
  }
  // Lowering one exponent keeps the relative lex order of distinct terms.
  return Poly(vars_, std::move(out));
}

std::optional<Poly> Poly::divide_exact(const Poly& divisor) const {
  auto v = merge_vars(*this, divisor);
  if (divisor.is_zero()) throw DivisionByZero("exact division by the zero polynomial");
  if (is_zero()) return Poly(v);
  if (divisor.terms_.size() == 1) {
    const auto& [dm, dc] = divisor.terms_[0];
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
      if (!dm.divides(m)) return std::nullopt;
      out.emplace_back(m / dm, c / dc);
    }
    return Poly(v, std::move(out));
  }
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    // Cheap necessary condition on per-variable degrees.
    if (divisor.degree_in(i) > degree_in(i)) return std::nullopt;
  }
  // The lex-smallest terms must divide as well.
  if (!divisor.terms_.back().first.divides(terms_.back().first)) return std::nullopt;
  const auto& [lm, lc] = divisor.terms_.front();
  Poly rem(v, terms_);
  std::vector<Term> quotient;
  while (!rem.is_zero()) {
    const auto& [rm, rc] = rem.terms_.front();
    if (!lm.divides(rm)) return std::nullopt;
    Monomial qm = rm / lm;
    Rational qc = rc / lc;
    quotient.emplace_back(qm, qc);
    rem = rem - divisor.mul_monomial(qm, qc);
  }
  return Poly(v, std::move(quotient));  // produced in descending order
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return Monomial();
  Monomial m = terms_[0].first;
  for (std::size_t i = 1; i < terms_.size(); ++i) m = Monomial::min(m, terms_[i].first);
  return m;
}

Poly Poly::divide_monomial(const Monomial& m) const {
  Poly r(vars_);
  r.terms_.reserve(terms_.size());
  for (const auto& [mm, c] : terms_) r.terms_.emplace_back(mm / m, c);
  return r;
}

unsigned Poly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first[var]);
  return d;
}

unsigned Poly::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.degree());
  return d;
}

bool Poly::depends_on(std::size_t var) const {
  for (const auto& t : terms_)
    if (t.first[var] != 0) return true;
  return false;
}

bool Poly::coordinate_free() const {
  if (!vars_) return true;
  for (std::size_t i = 0; i < vars_->coordinate_count(); ++i)
    if (depends_on(i)) return false;
  return true;
}

Rational Poly::evaluate(std::span<const Rational> values) const {
  Rational sum = 0;
  Rational term;
  for (const auto& [m, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < kMaxVariables; ++i) {
      unsigned e = m[i];
      if (e == 0) continue;
      if (i >= values.size()) throw Error("evaluation point is missing a variable");
      Rational p;
      mpz_pow_ui(mpq_numref(p.get_mpq_t()), mpq_numref(values[i].get_mpq_t()), e);
      mpz_pow_ui(mpq_denref(p.get_mpq_t()), mpq_denref(values[i].get_mpq_t()), e);
      term *= p;
    }
    sum += term;
  }
  return sum;
}

Poly Poly::partial_evaluate(const std::map<std::size_t, Rational>& values) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    Monomial rest = m;
    Rational coeff = c;
    for (const auto& [i, val] : values) {
      unsigned e = m[i];
      if (e == 0) continue;
      rest.set(i, 0);
      Rational p;
      mpz_pow_ui(mpq_numref(p.get_mpq_t()), mpq_numref(val.get_mpq_t()), e);
      mpz_pow_ui(mpq_denref(p.get_mpq_t()), mpq_denref(val.get_mpq_t()), e);
      coeff *= p;
    }
    out.emplace_back(rest, coeff);
  }
  return from_terms(vars_, std::move(out));
}

bool Poly::operator==(const Poly& o) const {
  if (!compatible(vars_, o.vars_)) throw VarTableMismatch();
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].first != o.terms_[i].first || terms_[i].second != o.terms_[i].second) return false;
  return true;
}

int Poly::compare(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return terms_.size() < o.terms_.size() ? -1 : 1;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (int c = terms_[i].first.compare(o.terms_[i].first)) return c;
    if (int c = cmp(terms_[i].second, o.terms_[i].second)) return c < 0 ? -1 : 1;
  }
  return 0;
}

Poly rebase(const Poly& p, const VarTablePtr& target) {
  if (!p.vars() || p.vars() == target) return Poly::from_terms(target, p.terms());
  std::vector<std::size_t> map(p.vars()->size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!p.depends_on(i)) continue;
    map[i] = target->index(p.vars()->name(i));
  }
  std::vector<Poly::Term> out;
  out.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    Monomial r;
    for (std::size_t i = 0; i < map.size(); ++i)
      if (m[i]) r.set(map[i], m[i]);
    out.emplace_back(r, c);
  }
  return Poly::from_terms(target, std::move(out));
}

Poly poly_arith(PolyOp op, const Poly& p, const Poly& q) {
  switch (op) {
    case PolyOp::Add:
      return p + q;
    case PolyOp::Mul:
      return p * q;
    case PolyOp::Neg:
      return -p;
  }
  throw Error("unknown polynomial operation");
}

}  // namespace dlambda
