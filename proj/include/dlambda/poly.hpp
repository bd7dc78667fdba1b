#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "dlambda/monomial.hpp"
#include "dlambda/vartable.hpp"

namespace dlambda {

using Rational = mpq_class;
using Integer = mpz_class;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted in descending lex order with no zero coefficients,
/// so two polynomials over the same table are equal iff their term vectors
/// are equal. A default-constructed Poly is the zero polynomial with no
/// table attached; it adopts the table of whatever it is combined with.
class Poly {
 public:
  using Term = std::pair<Monomial, Rational>;

  Poly() = default;
  explicit Poly(VarTablePtr vars) : vars_(std::move(vars)) {}

  static Poly constant(VarTablePtr vars, const Rational& c);
  static Poly variable(VarTablePtr vars, std::size_t index);
  static Poly variable(VarTablePtr vars, std::string_view name);
  static Poly monomial(VarTablePtr vars, const Monomial& m, const Rational& c = 1);
  /// Sorts, merges equal monomials and drops zeros.
  static Poly from_terms(VarTablePtr vars, std::vector<Term> terms);

  const VarTablePtr& vars() const noexcept { return vars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  bool is_one() const;
  /// Value of a constant polynomial.
  std::optional<Rational> constant_value() const;
  const Term& leading() const { return terms_.front(); }

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& c) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly mul_monomial(const Monomial& m, const Rational& c = 1) const;
  Poly pow(unsigned n) const;

  /// Formal partial derivative with respect to table position `var`.
  Poly derivative(std::size_t var) const;

  /// Quotient when `divisor` divides *this exactly, otherwise nullopt.
  std::optional<Poly> divide_exact(const Poly& divisor) const;
  /// Componentwise minimum of all exponent vectors (1 for the zero polynomial).
  Monomial monomial_content() const;
  /// Caller guarantees every term is divisible by m.
  Poly divide_monomial(const Monomial& m) const;

  unsigned degree_in(std::size_t var) const;
  unsigned total_degree() const;
  bool depends_on(std::size_t var) const;
  /// True when no coordinate (non-parameter) variable occurs.
  bool coordinate_free() const;

  /// Full assignment by table index.
  Rational evaluate(std::span<const Rational> values) const;
  /// Substitutes rationals for the variables present in `values`; others stay.
  Poly partial_evaluate(const std::map<std::size_t, Rational>& values) const;

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }
  /// Total order on term vectors (size first); used to sort factor lists.
  int compare(const Poly& o) const;

 private:
  Poly(VarTablePtr vars, std::vector<Term> sorted) : vars_(std::move(vars)), terms_(std::move(sorted)) {}
  static VarTablePtr merge_vars(const Poly& a, const Poly& b);

  VarTablePtr vars_;
  std::vector<Term> terms_;
};

/// Same polynomial over another table; every occurring name must exist there.
Poly rebase(const Poly& p, const VarTablePtr& target);

enum class PolyOp { Add, Mul, Neg };
/// Named entry point used by the CLI and bindings; Neg ignores q.
Poly poly_arith(PolyOp op, const Poly& p, const Poly& q);

}  // namespace dlambda
