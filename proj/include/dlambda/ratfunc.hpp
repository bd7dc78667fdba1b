#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlambda/poly.hpp"

namespace dlambda {

/// Denominator kept as monomial * prod(base^exp). Bases are monic, have no
/// monomial content, are not constant, and are pairwise distinct; the list
/// is sorted by Poly::compare. The constant part always lives in the
/// numerator.
struct Denominator {
  struct Factor {
    Poly base;
    unsigned exp;
  };
  Monomial mono;
  std::vector<Factor> factors;

  bool is_one() const noexcept { return factors.empty() && mono.is_one(); }
  bool is_monomial() const noexcept { return factors.empty(); }
  Poly expand(const VarTablePtr& vars) const;
};

/// Quotient of polynomials. No multivariate gcd is taken: the representation
/// is reduced only by monomial content and by trial division of the numerator
/// by the known denominator bases, so equality is decided by
/// cross-multiplication rather than by comparing fields.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(VarTablePtr vars) : num_(std::move(vars)) {}
  RatFunc(Poly num);  // NOLINT(google-explicit-constructor)
  /// Throws DivisionByZero when den is zero.
  RatFunc(const Poly& num, const Poly& den);

  static RatFunc constant(VarTablePtr vars, const Rational& c) { return RatFunc(Poly::constant(std::move(vars), c)); }
  static RatFunc variable(VarTablePtr vars, std::string_view name) {
    return RatFunc(Poly::variable(std::move(vars), name));
  }

  const VarTablePtr& vars() const noexcept { return num_.vars(); }
  const Poly& num() const noexcept { return num_; }
  const Denominator& den_factored() const noexcept { return den_; }
  Poly den() const { return den_.expand(vars()); }

  bool is_zero() const noexcept { return num_.is_zero(); }
  /// Denominator is 1 in the stored representation.
  bool is_polynomial() const noexcept { return den_.is_one(); }
  /// The polynomial this fraction equals, if any (exact division).
  std::optional<Poly> as_poly() const;
  std::optional<Rational> constant_value() const;

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc operator*(const Rational& c) const;
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc inverse() const;
  RatFunc pow(int n) const;

  /// Partial derivative by table index; no parameter check (see differentiate).
  RatFunc derivative(std::size_t var) const;

  /// Cross-multiplication equality.
  bool equals(const RatFunc& o) const;
  bool operator==(const RatFunc& o) const { return equals(o); }
  bool operator!=(const RatFunc& o) const { return !equals(o); }

  /// Full assignment by table index. Throws DivisionByZero on a pole.
  Rational evaluate(std::span<const Rational> values) const;
  RatFunc partial_evaluate(const std::map<std::size_t, Rational>& values) const;

  bool depends_on(std::size_t var) const;
  bool coordinate_free() const;

  /// Same value over another table holding every name that occurs here.
  RatFunc rebase(const VarTablePtr& target) const;

 private:
  friend RatFunc make_ratfunc(Poly num, Denominator den);
  void normalize();

  Poly num_;
  Denominator den_;
};

RatFunc make_ratfunc(Poly num, Denominator den);

/// Throws NotACoordinate for parameters and UnknownVariable for unknown names.
RatFunc differentiate(const RatFunc& f, std::string_view var);

/// Images of the source table's variables, expressed over `target`.
/// Variables without an image are an error only if they occur.
struct Substitution {
  VarTablePtr source;
  VarTablePtr target;
  std::vector<std::optional<RatFunc>> images;

  /// Unmapped names that also exist in `target` map to themselves.
  static Substitution make(VarTablePtr source, VarTablePtr target, const std::map<std::string, RatFunc>& map);
  static Substitution identity(VarTablePtr vars);
};

/// Common-denominator composition. Throws DivisionByZero when a substituted
/// denominator vanishes identically.
RatFunc substitute(const RatFunc& f, const Substitution& s);
Poly substitute_poly_to_poly(const Poly& p, const std::vector<Poly>& images, const VarTablePtr& target);

/// Evaluates with coordinates and parameters given by name.
Rational evaluate(const RatFunc& f, const std::map<std::string, Rational>& point,
                  const std::map<std::string, Rational>& params = {});

/// Sum over one common denominator, normalized once at the end.
RatFunc rf_sum(const std::vector<RatFunc>& terms, const VarTablePtr& vars);

enum class RatOp { Add, Mul, Div, Neg };
/// Named entry point used by the CLI and bindings; Neg ignores g.
RatFunc rf_arith(RatOp op, const RatFunc& f, const RatFunc& g);

}  // namespace dlambda
