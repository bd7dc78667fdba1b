#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlambda/chartmap.hpp"
#include "dlambda/section.hpp"

// The group PGL3: its matrix chart, the big cell and the change of
// variables between them, the sl3 x sl3 vector fields, the order-two
// operator D0, the twisted operators D_lambda and the Weyl twists.
//
// Sections of L_lambda are handled in two pictures. On the matrix chart a
// section is a function of the nine entries g_ij (for instance
// f_lambda = g33^l1 * D11^l2). On the big cell a section is written a * f_lambda
// and only the coefficient a is stored; operators in that picture are the
// matrix-chart ones conjugated by f_lambda and carried over by `to_cell`.
namespace dlambda::pgl3 {

using IntMatrix = std::array<std::array<int, 3>, 3>;

IntMatrix matrix_product(const IntMatrix& a, const IntMatrix& b);
IntMatrix matrix_commutator(const IntMatrix& a, const IntMatrix& b);
IntMatrix matrix_transpose(const IntMatrix& a);

enum class Gen { X1, X2, X3, Y1, Y2, Y3, H1, H2 };
enum class Side { Left, Right };

struct Generator {
  Gen label = Gen::X1;
  Side side = Side::Left;
};

inline constexpr std::array<Gen, 8> kAllGens = {Gen::X1, Gen::X2, Gen::X3, Gen::Y1,
                                                Gen::Y2, Gen::Y3, Gen::H1, Gen::H2};
inline constexpr std::array<Gen, 6> kNilpotentGens = {Gen::X1, Gen::X2, Gen::X3, Gen::Y1, Gen::Y2, Gen::Y3};

std::string gen_name(Gen g);
std::string generator_name(const Generator& g);
IntMatrix gen_matrix(Gen g);
/// Coordinates of a traceless matrix in the basis X1..Y3, H1, H2.
std::vector<std::pair<Gen, Rational>> decompose(const IntMatrix& m);

enum class Weyl { E, S1, S2, S1S2, S2S1, W0 };
std::string weyl_name(Weyl w);
IntMatrix weyl_matrix(Weyl w);

/// nu1 * omega1 + nu2 * omega2 with parameter-affine coefficients.
struct Weight {
  AffineExpr nu1, nu2;

  static Weight of(const VarTablePtr& vars, long a, long b);
  static Weight rho(const VarTablePtr& vars) { return of(vars, 1, 1); }
  static Weight alpha1(const VarTablePtr& vars) { return of(vars, 2, -1); }
  static Weight alpha2(const VarTablePtr& vars) { return of(vars, -1, 2); }
  /// nu = l2 - 2 m1 + m2, l1 + m1 - 2 m2 over the parameters of `vars`.
  static Weight support_weight(const VarTablePtr& vars);

  Weight star() const { return {nu2, nu1}; }
  Weight operator+(const Weight& o) const { return {nu1 + o.nu1, nu2 + o.nu2}; }
  Weight operator-(const Weight& o) const { return {nu1 - o.nu1, nu2 - o.nu2}; }
  Weight operator*(long k) const { return {nu1 * Rational(k), nu2 * Rational(k)}; }
  /// Decided only when both coefficients are constants.
  std::optional<bool> dominant() const;
};

/// Charts and the change of variables, built once.
class Model {
 public:
  static const Model& get();

  /// g11 .. g33 and the parameters l1 l2 m1 m2.
  const ChartPtr& matrix() const { return matrix_; }
  /// a1 a2 U12 U21 U13 U31 U23 U32 and the parameters.
  const ChartPtr& cell() const { return cell_; }
  /// The big cell with the scale t = g33 appended.
  const ChartPtr& cone() const { return cone_; }
  /// Matrix chart whose units are g11 and D33.
  const ChartPtr& opposite() const { return opposite_; }
  /// Matrix chart -> cone, g_ij = t x_ij(a, U).
  const ChartMap& cdv() const { return cdv_; }

  /// Entry g_ij, 1-based.
  const Poly& g(int i, int j) const { return g_[i - 1][j - 1]; }
  /// Minor obtained by deleting row i and column j, 1-based.
  const Poly& minor(int i, int j) const { return minor_[i - 1][j - 1]; }
  const Poly& det() const { return det_; }

  AffineExpr param(const ChartPtr& chart, const char* name) const;

 private:
  Model();
  ChartPtr matrix_, cell_, cone_, opposite_;
  ChartMap cdv_;
  std::array<std::array<Poly, 3>, 3> g_, minor_;
  Poly det_;
};

/// The eight big-cell coordinates as functions of g.
std::map<std::string, RatFunc> cdv_forward();
/// g_ij / g33 for (i, j) != (3, 3), expanded from u * diag(a1 a2, a2, 1) * u'.
std::map<std::string, Poly> cdv_backward();

DiffOp infinitesimal_vector_field(const Generator& gen);
/// Big-cell form of a matrix-chart vector field (lambda = 0).
DiffOp vector_field_big_cell(const Generator& gen);

/// d/da1 and d/da2 written on the matrix chart.
std::pair<DiffOp, DiffOp> partial_alpha_ops();
DiffOp d0_matrix();
/// d/da1 d/da2 on the big cell.
DiffOp d0_cell();

/// g33^l1 * D11^l2 on the matrix chart.
PowerSection f_lambda_matrix();
/// g11^l1 * D33^l2, the section used on the opposite chart.
PowerSection f_lambda_star_matrix();
/// g33^nu2 * D11^nu1 * D^m1 with nu computed from the given m.
PowerSection sigma_matrix(const AffineExpr& m1, const AffineExpr& m2);
/// a1^m1 * a2^m2 (coefficient of f_lambda).
PowerSection sigma_cell(const AffineExpr& m1, const AffineExpr& m2);

/// Substitutes g = t x(a, U) into every base; monomial content becomes
/// separate coordinate bases. Constant factors with a symbolic exponent are
/// dropped when `up_to_constant` (only for conjugation), otherwise rejected.
PowerSection section_to_cone(const PowerSection& s, bool up_to_constant = false);
/// s / f_lambda on the big cell; the scale t must cancel.
PowerSection section_to_cell(const PowerSection& s);

/// Keeps the d/dt-free part of an operator on the cone chart and moves it to
/// the big cell. Coefficients must not involve t.
DiffOp restrict_to_cell(const DiffOp& a);
/// Coefficient picture on the big cell of an operator acting on
/// matrix-chart sections: f_lambda^-1 o A o f_lambda, carried over.
DiffOp to_cell(const DiffOp& a, bool twisted = true);

/// Big-cell coefficient form of the g x g action on L_lambda.
DiffOp phi_lambda(const Generator& gen);
/// phi_lambda(gen) - vector_field_big_cell(gen), a function.
RatFunc phi_lambda_correction(const Generator& gen);

/// Image of c under the left vector fields on the matrix chart.
DiffOp casimir_matrix();
/// Image of c under phi_lambda (left factor), on the big cell.
DiffOp casimir();
/// (mu1 + mu2)/3 + (mu1^2 + mu1 mu2 + mu2^2)/9.
RatFunc chi(const Weight& mu);

/// g -> w^-1 g w2 as a map of the matrix chart onto itself.
ChartMap group_substitution(Weyl w, Weyl w2);
/// W o D o W^-1 with (W F)(g) = F(w^-1 g w).
DiffOp weyl_twist_op(const DiffOp& d, Weyl w);
/// W applied to a matrix-chart section. `inverse` applies W^-1 instead.
PowerSection weyl_twist_section(const PowerSection& s, Weyl w, bool inverse = false);

/// f_lambda o D0 o f_lambda^-1 on matrix-chart sections.
DiffOp d_lambda_matrix();
/// Big-cell coefficient form of W o D_lambda o W^-1.
DiffOp d_lambda_twisted(Weyl w);
/// D0 conjugated into the trivialization by f_lambda* (opposite chart).
DiffOp d_lambda_opposite();

/// Euler operator sum g_ij d/dg_ij.
DiffOp euler_matrix();

/// Text of the minor D_ij with g-entries, parenthesized.
std::string minor_text(int i, int j);

}  // namespace dlambda::pgl3
