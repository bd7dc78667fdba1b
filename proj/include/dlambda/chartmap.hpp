#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlambda/diffop.hpp"

namespace dlambda {

/// Birational change of coordinates between two charts of equal dimension.
/// `forward` gives each source coordinate as a function on the target chart,
/// `inverse` gives each target coordinate as a function on the source chart.
/// Parameters are shared by name.
class ChartMap {
 public:
  /// Verifies the chain rule J_inv(forward(t)) * J_forward(t) = I exactly and
  /// throws SingularMap otherwise.
  static ChartMap make(ChartPtr source, ChartPtr target, const std::map<std::string, RatFunc>& forward,
                       const std::map<std::string, RatFunc>& inverse);

  const ChartPtr& source() const noexcept { return source_; }
  const ChartPtr& target() const noexcept { return target_; }
  /// Source variables -> target expressions.
  const Substitution& forward() const noexcept { return forward_; }
  /// Target variables -> source expressions.
  const Substitution& inverse() const noexcept { return inverse_; }
  /// d/d(source coordinate k) written on the target chart.
  const DiffOp& basis(std::size_t source_coordinate) const { return basis_.at(source_coordinate); }

  /// The same map read in the other direction (reuses no cached data).
  ChartMap reversed() const;
  /// forward o inverse and inverse o forward are the identity, checked by substitution.
  bool roundtrip() const;

 private:
  ChartPtr source_, target_;
  std::map<std::string, RatFunc> fwd_map_, inv_map_;
  Substitution forward_, inverse_;
  std::vector<DiffOp> basis_;
};

/// A on the source chart rewritten on the target chart:
/// apply(transport(A, M), f) = substitute(apply(A, substitute(f, M.inverse())), M.forward()).
DiffOp transport(const DiffOp& a, const ChartMap& m);

struct RegularityResult {
  bool regular = true;
  /// First coefficient whose denominator does not clear against the unit set.
  std::optional<RatFunc> witness;
  std::optional<Monomial> witness_index;
};

/// Each coefficient must become a polynomial once powers of the chart's
/// units are allowed in the denominator (greedy trial division).
RegularityResult regular_on(const DiffOp& a, const Chart& c);

struct NilpotencyResult {
  bool found = false;
  unsigned depth = 0;
};

/// Smallest n <= limit with ad(V)^n(A) = 0.
NilpotencyResult ad_nilpotency_depth(const DiffOp& a, const DiffOp& v, unsigned limit);

}  // namespace dlambda
