#pragma once

#include <string>
#include <string_view>

#include "dlambda/section.hpp"

namespace dlambda {

// Canonical text form. The grammar is described in docs/text-format.md.

std::string format_rational(const Rational& c);
std::string format_monomial(const Monomial& m, const VarTable& vars);
std::string format_poly(const Poly& p);
std::string format_ratfunc(const RatFunc& f);
std::string format_diffop(const DiffOp& a);
std::string format_section(const PowerSection& s);

/// Throws ParseError (also for unknown names) and DivisionByZero.
RatFunc parse_ratfunc(std::string_view text, const VarTablePtr& vars);
/// As parse_ratfunc, but the value must be a polynomial.
Poly parse_poly(std::string_view text, const VarTablePtr& vars);
/// Accepts products and sums of functions and d/dv factors in any order;
/// the result is normal-ordered.
DiffOp parse_diffop(std::string_view text, const ChartPtr& chart);

}  // namespace dlambda
