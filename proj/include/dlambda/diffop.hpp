#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dlambda/ratfunc.hpp"

namespace dlambda {

/// Named affine chart. Its coordinates are the coordinate variables of
/// `vars`; `units` are the polynomials allowed in denominators when testing
/// regularity. Two charts are compatible when their tables agree, so a chart
/// with extra units can be used to re-test an operator built elsewhere.
struct Chart {
  std::string name;
  VarTablePtr vars;
  std::vector<Poly> units;

  static std::shared_ptr<const Chart> make(std::string name, VarTablePtr vars, std::vector<Poly> units = {});
  std::shared_ptr<const Chart> with_units(std::string name, std::vector<Poly> units) const;
  std::size_t dimension() const { return vars->coordinate_count(); }
};

using ChartPtr = std::shared_ptr<const Chart>;

/// Normal-ordered differential operator sum_a c_a * d^a. The multi-index is
/// stored as a Monomial over the chart's table; only coordinate slots are
/// ever nonzero.
class DiffOp {
 public:
  using Terms = std::map<Monomial, RatFunc, DegLexDescending>;

  DiffOp() = default;
  explicit DiffOp(ChartPtr chart) : chart_(std::move(chart)) {}
  static DiffOp scalar(ChartPtr chart, const RatFunc& f);
  static DiffOp partial(ChartPtr chart, std::size_t var, unsigned k = 1);
  static DiffOp partial(ChartPtr chart, std::string_view var, unsigned k = 1);
  static DiffOp from_terms(ChartPtr chart, Terms terms);

  const ChartPtr& chart() const noexcept { return chart_; }
  const VarTablePtr& vars() const { return chart_->vars; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Coefficient of d^a (zero if absent).
  RatFunc coefficient(const Monomial& a) const;
  /// Derived quantity: max |a| over stored terms (0 for the zero operator).
  unsigned order() const;

  /// Adds c * d^a in place.
  void add_term(const Monomial& a, const RatFunc& c);

  DiffOp operator-() const;
  DiffOp operator+(const DiffOp& o) const;
  DiffOp operator-(const DiffOp& o) const;
  /// Left multiplication by a function: f * A.
  friend DiffOp operator*(const RatFunc& f, const DiffOp& a);
  DiffOp operator*(const Rational& c) const;

  /// Coefficientwise cross-multiplication equality.
  bool equals(const DiffOp& o) const;

  template <class F>
  DiffOp map_coefficients(F&& f) const {
    DiffOp r(chart_);
    for (const auto& [a, c] : terms_) r.add_term(a, f(c));
    return r;
  }

 private:
  ChartPtr chart_;
  Terms terms_;
};

/// Normal-ordered A o B by the generalized Leibniz rule.
DiffOp op_compose(const DiffOp& a, const DiffOp& b);
RatFunc op_apply(const DiffOp& a, const RatFunc& f);
DiffOp commutator(const DiffOp& a, const DiffOp& b);
/// a^n under composition.
DiffOp op_power(const DiffOp& a, unsigned n);

/// Throws ChartMismatch unless both charts share a table.
void require_same_chart(const ChartPtr& a, const ChartPtr& b);

}  // namespace dlambda
