#pragma once

#include <random>

#include "dlambda/ratfunc.hpp"

namespace testsupport {

using dlambda::Monomial;
using dlambda::Poly;
using dlambda::Rational;
using dlambda::RatFunc;
using dlambda::VarTablePtr;

inline Rational random_rational(std::mt19937_64& rng, int span = 9) {
  std::uniform_int_distribution<int> num(-span, span), den(1, 4);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Rational random_nonzero(std::mt19937_64& rng, int span = 9) {
  Rational r;
  do r = random_rational(rng, span);
  while (sgn(r) == 0);
  return r;
}

/// Random polynomial in the first `nvars` variables of the table.
inline Poly random_poly(std::mt19937_64& rng, const VarTablePtr& vars, std::size_t nvars, int terms, unsigned max_deg) {
  std::uniform_int_distribution<unsigned> var(0, static_cast<unsigned>(nvars - 1)), deg(0, max_deg);
  std::vector<Poly::Term> ts;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    unsigned d = deg(rng);
    for (unsigned k = 0; k < d; ++k) {
      unsigned v = var(rng);
      m.set(v, m[v] + 1);
    }
    ts.emplace_back(m, random_nonzero(rng));
  }
  return Poly::from_terms(vars, std::move(ts));
}

inline Poly random_nonzero_poly(std::mt19937_64& rng, const VarTablePtr& vars, std::size_t nvars, int terms,
                                unsigned max_deg) {
  Poly p;
  do p = random_poly(rng, vars, nvars, terms, max_deg);
  while (p.is_zero());
  return p;
}

inline std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rational> pt;
  for (std::size_t i = 0; i < n; ++i) pt.push_back(random_rational(rng, 7));
  return pt;
}

}  // namespace testsupport
