#include "dlambda/diffop.hpp"

#include <functional>
#include <unordered_map>

#include "dlambda/errors.hpp"

namespace dlambda {

ChartPtr Chart::make(std::string name, VarTablePtr vars, std::vector<Poly> units) {
  for (const auto& u : units)
    if (u.is_zero()) throw Error("chart unit set contains the zero polynomial");
  return std::make_shared<const Chart>(Chart{std::move(name), std::move(vars), std::move(units)});
}

ChartPtr Chart::with_units(std::string new_name, std::vector<Poly> new_units) const {
  return make(std::move(new_name), vars, std::move(new_units));
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (!a || !b) throw Error("operator has no chart");
  if (a == b || a->vars == b->vars || *a->vars == *b->vars) return;
  throw ChartMismatch(a->name, b->name);
}

DiffOp DiffOp::scalar(ChartPtr chart, const RatFunc& f) {
  DiffOp r(std::move(chart));
  r.add_term(Monomial(), f);
  return r;
}

DiffOp DiffOp::partial(ChartPtr chart, std::size_t var, unsigned k) {
  if (chart->vars->is_parameter(var)) throw NotACoordinate(chart->vars->name(var));
  DiffOp r(chart);
  r.add_term(Monomial::unit(var, k), RatFunc::constant(chart->vars, 1));
  return r;
}

DiffOp DiffOp::partial(ChartPtr chart, std::string_view var, unsigned k) {
  std::size_t i = chart->vars->index(var);
  return partial(std::move(chart), i, k);
}

DiffOp DiffOp::from_terms(ChartPtr chart, Terms terms) {
  DiffOp r(std::move(chart));
  for (auto& [a, c] : terms) r.add_term(a, c);
  return r;
}

RatFunc DiffOp::coefficient(const Monomial& a) const {
  auto it = terms_.find(a);
  return it == terms_.end() ? RatFunc(Poly(vars())) : it->second;
}

unsigned DiffOp::order() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.degree());
  return d;
}

void DiffOp::add_term(const Monomial& a, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(a, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffOp DiffOp::operator-() const {
  DiffOp r(chart_);
  for (const auto& [a, c] : terms_) r.terms_.emplace(a, -c);
  return r;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
  require_same_chart(chart_, o.chart_);
  DiffOp r = *this;
  for (const auto& [a, c] : o.terms_) r.add_term(a, c);
  return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const { return *this + (-o); }

DiffOp operator*(const RatFunc& f, const DiffOp& a) {
  DiffOp r(a.chart_);
  if (f.is_zero()) return r;
  for (const auto& [idx, c] : a.terms_) r.add_term(idx, f * c);
  return r;
}

DiffOp DiffOp::operator*(const Rational& c) const {
  DiffOp r(chart_);
  if (sgn(c) == 0) return r;
  for (const auto& [a, f] : terms_) r.terms_.emplace(a, f * c);
  return r;
}

bool DiffOp::equals(const DiffOp& o) const {
  require_same_chart(chart_, o.chart_);
  auto it = terms_.begin();
  auto jt = o.terms_.begin();
  while (it != terms_.end() || jt != o.terms_.end()) {
    if (jt == o.terms_.end() || (it != terms_.end() && DegLexDescending{}(it->first, jt->first))) {
      if (!it->second.is_zero()) return false;
      ++it;
    } else if (it == terms_.end() || DegLexDescending{}(jt->first, it->first)) {
      if (!jt->second.is_zero()) return false;
      ++jt;
    } else {
      if (!it->second.equals(jt->second)) return false;
      ++it;
      ++jt;
    }
  }
  return true;
}

namespace {

// Memoized mixed partial derivatives of one function.
class DerivativeMemo {
 public:
  explicit DerivativeMemo(const RatFunc& f) { memo_.emplace(Monomial(), f); }

  const RatFunc& get(const Monomial& a) {
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    std::size_t v = 0;
    while (a[v] == 0) ++v;
    Monomial prev = a;
    prev.set(v, a[v] - 1);
    RatFunc d = get(prev).derivative(v);
    return memo_.emplace(a, std::move(d)).first->second;
  }

 private:
  std::unordered_map<Monomial, RatFunc, MonomialHash> memo_;
};

Rational multinomial_binomial(const Monomial& alpha, const Monomial& gamma) {
  Integer r = 1;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (!gamma[i] || gamma[i] == alpha[i]) continue;
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), alpha[i], gamma[i]);
    r *= b;
  }
  return Rational(r);
}

void sub_indices(const Monomial& alpha, const std::function<void(const Monomial&)>& visit) {
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < kMaxVariables; ++i)
    if (alpha[i]) slots.push_back(i);
  Monomial g;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == slots.size()) {
      visit(g);
      return;
    }
    for (unsigned e = 0; e <= alpha[slots[k]]; ++e) {
      g.set(slots[k], e);
      rec(k + 1);
    }
    g.set(slots[k], 0);
  };
  rec(0);
}

}  // namespace

DiffOp op_compose(const DiffOp& a, const DiffOp& b) {
  require_same_chart(a.chart(), b.chart());
  std::vector<DerivativeMemo> memos;
  memos.reserve(b.terms().size());
  for (const auto& [beta, cb] : b.terms()) memos.emplace_back(cb);

  std::map<Monomial, std::vector<RatFunc>, DegLexDescending> acc;
  for (const auto& [alpha, ca] : a.terms()) {
    sub_indices(alpha, [&](const Monomial& gamma) {
      Rational mult = multinomial_binomial(alpha, gamma);
      Monomial rest = alpha / gamma;
      std::size_t k = 0;
      for (const auto& [beta, cb] : b.terms()) {
        const RatFunc& d = memos[k++].get(gamma);
        if (d.is_zero()) continue;
        acc[rest * beta].push_back(ca * d * mult);
      }
    });
  }
  DiffOp r(a.chart());
  for (auto& [idx, parts] : acc) r.add_term(idx, rf_sum(parts, a.vars()));
  return r;
}

RatFunc op_apply(const DiffOp& a, const RatFunc& f) {
  if (f.vars() && !compatible(f.vars(), a.vars())) throw VarTableMismatch();
  DerivativeMemo memo(f);
  std::vector<RatFunc> parts;
  for (const auto& [alpha, c] : a.terms()) {
    const RatFunc& d = memo.get(alpha);
    if (!d.is_zero()) parts.push_back(c * d);
  }
  return rf_sum(parts, a.vars());
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return op_compose(a, b) - op_compose(b, a); }

DiffOp op_power(const DiffOp& a, unsigned n) {
  DiffOp r = DiffOp::scalar(a.chart(), RatFunc::constant(a.vars(), 1));
  for (unsigned i = 0; i < n; ++i) r = op_compose(a, r);
  return r;
}

}  // namespace dlambda
