#pragma once

#include <array>

#include "dlambda/chartmap.hpp"
#include "dlambda/pgl3.hpp"
#include "dlambda/section.hpp"

// Complete conics: pairs ([S], [S']) of symmetric matrices with S S' scalar.
// The big cell is parametrized by an upper unipotent u (entries u12, u13, u23
// at their matrix positions) and x, y:
//   S = u^-T diag(1, x, xy) u^-1,   S' = u diag(xy, y, 1) u^T.
namespace dlambda::conics {

using Matrix3 = std::array<std::array<RatFunc, 3>, 3>;

struct ConicPair {
  Matrix3 s, s_prime;
};

class ConicModel {
 public:
  static const ConicModel& get();

  /// u12 u13 u23 x y.
  const ChartPtr& conic() const { return conic_; }
  /// The conic chart with the scale t = S11 appended.
  const ChartPtr& scaled() const { return scaled_; }
  /// s12 s13 s22 s23 s33, the entries of S / S11.
  const ChartPtr& entries() const { return entries_; }
  /// S11 S12 S13 S22 S23 S33.
  const ChartPtr& cone() const { return cone_; }

  /// conic -> entries, through the LDL^T factorization of S.
  const ChartMap& to_entries() const { return to_entries_; }
  /// scaled -> cone, S = t * S(u, x, y).
  const ChartMap& to_cone() const { return to_cone_; }

 private:
  ConicModel();
  ChartPtr conic_, scaled_, entries_, cone_;
  ChartMap to_entries_, to_cone_;
};

/// Both matrices as polynomials on the conic chart.
ConicPair conic_parametrization();
/// Off-diagonal entries of S S' vanish and the diagonal ones agree.
bool in_conic_variety(const ConicPair& p);
/// The 2x2 minors of S (rows i<j, columns k<l), as polynomials.
std::vector<RatFunc> minors_2x2(const Matrix3& s);

/// d/dx d/dy on the conic chart.
DiffOp conic_d0();
DiffOp conic_d0_entries();
DiffOp conic_d0_cone();

/// sum (xi^T S + S xi)_ij d/dS_ij on the cone (i <= j). This is minus the
/// fundamental field of g.S = g^-T S g^-1, the same sign as the left fields
/// of pgl3, so xi -> field is a Lie homomorphism.
DiffOp conic_vector_field_cone(pgl3::Gen g);
/// The same field on the affine chart S11 = 1.
DiffOp conic_vector_field_entries(pgl3::Gen g);
DiffOp conic_euler_cone();

/// f o D o f^-1 on the cone with f = S11^l1 (S11 S22 - S12^2)^l2.
DiffOp conic_d_lambda_cone();

}  // namespace dlambda::conics
