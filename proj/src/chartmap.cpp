#include "dlambda/chartmap.hpp"

#include <functional>
#include <unordered_map>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

RatFunc over(const VarTablePtr& v, const RatFunc& f) { return f.vars() ? f : RatFunc(Poly(v)) + f; }

}  // namespace

ChartMap ChartMap::make(ChartPtr source, ChartPtr target, const std::map<std::string, RatFunc>& forward,
                        const std::map<std::string, RatFunc>& inverse) {
  const VarTable& sv = *source->vars;
  const VarTable& tv = *target->vars;
  const std::size_t n = sv.coordinate_count();
  if (tv.coordinate_count() != n) throw SingularMap("charts have different dimensions");
  for (std::size_t i = 0; i < n; ++i)
    if (!forward.count(sv.name(i))) throw SingularMap("no forward formula for '" + sv.name(i) + "'");
  for (std::size_t j = 0; j < n; ++j)
    if (!inverse.count(tv.name(j))) throw SingularMap("no inverse formula for '" + tv.name(j) + "'");

  ChartMap m;
  m.source_ = source;
  m.target_ = target;
  m.fwd_map_ = forward;
  m.inv_map_ = inverse;
  m.forward_ = Substitution::make(source->vars, target->vars, forward);
  m.inverse_ = Substitution::make(target->vars, source->vars, inverse);

  // jinv[j][k] = d(inverse_j)/d(s_k), then pulled back along forward.
  std::vector<std::vector<RatFunc>> jinv(n, std::vector<RatFunc>(n));
  for (std::size_t j = 0; j < n; ++j) {
    RatFunc inv_j = over(source->vars, inverse.at(tv.name(j)));
    for (std::size_t k = 0; k < n; ++k) {
      RatFunc d = inv_j.derivative(k);
      jinv[j][k] = d.is_zero() ? RatFunc(Poly(target->vars)) : substitute(d, m.forward_);
    }
  }
  std::vector<std::vector<RatFunc>> jfwd(n, std::vector<RatFunc>(n));
  for (std::size_t k = 0; k < n; ++k) {
    RatFunc fwd_k = over(target->vars, forward.at(sv.name(k)));
    for (std::size_t j = 0; j < n; ++j) jfwd[k][j] = fwd_k.derivative(j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<RatFunc> parts;
      for (std::size_t k = 0; k < n; ++k)
        if (!jinv[i][k].is_zero() && !jfwd[k][j].is_zero()) parts.push_back(jinv[i][k] * jfwd[k][j]);
      RatFunc e = rf_sum(parts, target->vars);
      if (!e.equals(RatFunc::constant(target->vars, i == j ? 1 : 0)))
        throw SingularMap("Jacobian product differs from the identity at (" + tv.name(i) + ", " + tv.name(j) + ")");
    }
  }
  m.basis_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    DiffOp b(target);
    for (std::size_t j = 0; j < n; ++j) b.add_term(Monomial::unit(j), jinv[j][k]);
    m.basis_.push_back(std::move(b));
  }
  return m;
}

ChartMap ChartMap::reversed() const { return make(target_, source_, inv_map_, fwd_map_); }

bool ChartMap::roundtrip() const {
  const VarTable& sv = *source_->vars;
  const VarTable& tv = *target_->vars;
  for (std::size_t i = 0; i < sv.coordinate_count(); ++i) {
    RatFunc back = substitute(over(target_->vars, fwd_map_.at(sv.name(i))), inverse_);
    if (!back.equals(RatFunc::variable(source_->vars, sv.name(i)))) return false;
  }
  for (std::size_t j = 0; j < tv.coordinate_count(); ++j) {
    RatFunc back = substitute(over(source_->vars, inv_map_.at(tv.name(j))), forward_);
    if (!back.equals(RatFunc::variable(target_->vars, tv.name(j)))) return false;
  }
  return true;
}

DiffOp transport(const DiffOp& a, const ChartMap& m) {
  require_same_chart(a.chart(), m.source());
  const VarTablePtr& tv = m.target()->vars;
  std::unordered_map<Monomial, DiffOp, MonomialHash> memo;
  memo.emplace(Monomial(), DiffOp::scalar(m.target(), RatFunc::constant(tv, 1)));
  std::function<const DiffOp&(const Monomial&)> word = [&](const Monomial& idx) -> const DiffOp& {
    auto it = memo.find(idx);
    if (it != memo.end()) return it->second;
    std::size_t v = 0;
    while (idx[v] == 0) ++v;
    Monomial prev = idx;
    prev.set(v, idx[v] - 1);
    DiffOp r = op_compose(m.basis(v), word(prev));
    return memo.emplace(idx, std::move(r)).first->second;
  };
  std::map<Monomial, std::vector<RatFunc>, DegLexDescending> acc;
  for (const auto& [idx, c] : a.terms()) {
    RatFunc pulled = substitute(c, m.forward());
    const DiffOp& w = word(idx);
    for (const auto& [beta, d] : w.terms()) acc[beta].push_back(pulled * d);
  }
  DiffOp r(m.target());
  for (auto& [idx, parts] : acc) r.add_term(idx, rf_sum(parts, tv));
  return r;
}

namespace {

// Removes every unit factor that divides r exactly.
Poly strip_units(Poly r, const std::vector<Poly>& units) {
  bool progress = true;
  while (progress && !r.is_constant()) {
    progress = false;
    for (const auto& u : units) {
      if (u.is_constant()) continue;
      while (!r.is_constant()) {
        auto q = r.divide_exact(u);
        if (!q) break;
        r = std::move(*q);
        progress = true;
      }
    }
  }
  return r;
}

bool coefficient_regular(const RatFunc& f, const std::vector<Poly>& units) {
  if (f.is_polynomial()) return true;
  const VarTablePtr& v = f.vars();
  const Denominator& d = f.den_factored();
  // What is left of the denominator after units are cleared must divide the numerator.
  Poly rest = strip_units(Poly::monomial(v, d.mono), units);
  for (const auto& fac : d.factors) {
    Poly r = strip_units(fac.base, units);
    if (!r.is_constant()) rest = rest * r.pow(fac.exp);
  }
  if (rest.is_constant()) return true;
  return f.num().divide_exact(rest).has_value();
}

}  // namespace

RegularityResult regular_on(const DiffOp& a, const Chart& c) {
  RegularityResult out;
  if (a.is_zero()) return out;
  if (!compatible(a.vars(), c.vars)) throw ChartMismatch(a.chart()->name, c.name);
  for (const auto& [idx, coeff] : a.terms()) {
    if (!coefficient_regular(coeff, c.units)) {
      out.regular = false;
      out.witness = coeff;
      out.witness_index = idx;
      return out;
    }
  }
  return out;
}

NilpotencyResult ad_nilpotency_depth(const DiffOp& a, const DiffOp& v, unsigned limit) {
  NilpotencyResult out;
  DiffOp cur = a;
  for (unsigned n = 0; n <= limit; ++n) {
    if (cur.is_zero()) {
      out.found = true;
      out.depth = n;
      return out;
    }
    if (n == limit) break;
    cur = commutator(v, cur);
  }
  return out;
}

}  // namespace dlambda
