#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dlambda/diffop.hpp"

namespace dlambda {

/// c0 + sum_i c_i p_i over the parameter variables p_i of a table, stored as
/// a Poly of degree at most one that mentions no coordinate.
class AffineExpr {
 public:
  AffineExpr() = default;
  AffineExpr(VarTablePtr vars, const Rational& c) : p_(Poly::constant(std::move(vars), c)) {}
  /// Throws PreconditionError unless p is affine in parameters only.
  explicit AffineExpr(Poly p);
  static AffineExpr parameter(VarTablePtr vars, std::string_view name);

  const Poly& poly() const noexcept { return p_; }
  bool is_constant() const { return p_.is_constant(); }
  std::optional<Rational> constant_value() const { return p_.constant_value(); }
  /// Value when it is a constant integer.
  std::optional<long> integer_value() const;

  AffineExpr operator-() const { return AffineExpr(-p_); }
  AffineExpr operator+(const AffineExpr& o) const { return AffineExpr(p_ + o.p_); }
  AffineExpr operator-(const AffineExpr& o) const { return AffineExpr(p_ - o.p_); }
  AffineExpr operator+(long k) const { return AffineExpr(p_ + Poly::constant(p_.vars(), k)); }
  AffineExpr operator*(const Rational& c) const { return AffineExpr(p_ * c); }
  bool operator==(const AffineExpr& o) const { return p_ == o.p_; }
  AffineExpr partial_evaluate(const std::map<std::size_t, Rational>& values) const {
    return AffineExpr(p_.partial_evaluate(values));
  }

 private:
  Poly p_;
};

struct PowerFactor {
  Poly base;
  AffineExpr exponent;
};

/// prefactor * prod base_k^{e_k} with parameter-affine exponents e_k.
class PowerSection {
 public:
  PowerSection() = default;
  /// Merges equal bases and drops zero exponents; throws on a zero base.
  explicit PowerSection(RatFunc prefactor, std::vector<PowerFactor> factors = {});

  const RatFunc& prefactor() const noexcept { return prefactor_; }
  const std::vector<PowerFactor>& factors() const noexcept { return factors_; }
  const VarTablePtr& vars() const { return prefactor_.vars(); }
  bool is_zero() const { return prefactor_.is_zero(); }
  /// Exponent of `base` (zero when absent).
  AffineExpr exponent_of(const Poly& base) const;

  PowerSection operator*(const RatFunc& f) const;
  PowerSection operator*(const PowerSection& o) const;
  PowerSection inverse() const;
  /// Same factors, new prefactor.
  PowerSection with_prefactor(RatFunc p) const;

  /// Moves whole powers of each base out of the prefactor into the exponent.
  PowerSection normalized() const;
  /// Substitutes rational values for parameters everywhere.
  PowerSection specialize(const std::map<std::size_t, Rational>& params) const;
  /// The plain function, available when every exponent is a constant integer.
  std::optional<RatFunc> to_ratfunc() const;

 private:
  RatFunc prefactor_;
  std::vector<PowerFactor> factors_;
};

/// s^{-1} o A o s. Each d_v becomes d_v + L_v with
/// L_v = d_v(P)/P + sum_k e_k d_v(b_k)/b_k.
DiffOp conjugate(const DiffOp& a, const PowerSection& s);

/// A applied to s, returned over the same bases (then normalized).
PowerSection op_apply_section(const DiffOp& a, const PowerSection& s);

struct MultipleResult {
  bool ok = false;
  /// Parameter-only scalar c with s = c t (valid when ok).
  RatFunc scalar;
  /// s / t when the quotient is not a parameter-only scalar.
  PowerSection residual;
};

/// Throws DivisionByZero when t = 0.
MultipleResult express_as_multiple(const PowerSection& s, const PowerSection& t);

}  // namespace dlambda
