#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dlambda/pgl3.hpp"

// The four families of moves between the sections sigma_nu and the
// generation certificates assembled from them.
namespace dlambda::cert {

/// 2a/2b move nu to nu + alpha1 / nu + alpha2; 3a/3b to nu - alpha1 / nu - alpha2.
enum class Case { One, TwoA, TwoB, ThreeA, ThreeB, Four };

inline constexpr std::array<Case, 6> kAllCases = {Case::One,    Case::TwoA,   Case::TwoB,
                                                  Case::ThreeA, Case::ThreeB, Case::Four};

std::string case_label(Case c);
std::optional<Case> parse_case_label(const std::string& s);

/// Change of (m1, m2) produced by the move.
std::array<long, 2> case_shift(Case c);
pgl3::Weyl case_twist(Case c);
/// Weights mu of the factors (c - chi_mu), over the big-cell table; applied
/// right to left after the twisted operator.
std::vector<pgl3::Weight> casimir_factors(Case c);

/// The product of Casimir factors times D^w applied to sigma_(m1, m2), on
/// the big cell with symbolic parameters (case 4 with nu = rho substituted).
PowerSection case_image(Case c);

struct CaseScalar {
  bool ok = false;
  /// Parameter-only scalar; for case 4 in m1, m2 only.
  RatFunc scalar;
  /// Quotient witness when the image is not a multiple of the target.
  PowerSection residual;
};

/// Symbolic scalar, computed once and cached.
const CaseScalar& case_scalar(Case c);

/// The same computation with every parameter fixed. For case 4 the weight
/// must be rho. Throws PreconditionError otherwise.
CaseScalar case_scalar_at(Case c, long l1, long l2, long m1, long m2);

/// Engine-derived closed forms in l1 l2 m1 m2 over the big-cell table.
RatFunc closed_form(Case c);
std::string closed_form_text(Case c);
/// The form displayed in the reference for the cases that display one.
std::optional<RatFunc> displayed_form(Case c);

struct SupportPoint {
  long m1 = 0, m2 = 0;
  long nu1 = 0, nu2 = 0;
};

std::vector<SupportPoint> dominant_support(long l1, long l2);
/// Sum over the support of (dim L(nu))^2.
long long module_dimension(long l1, long l2);
long long weyl_dimension(long nu1, long nu2);

struct Edge {
  std::size_t from = 0, to = 0;
  Case label = Case::One;
  Rational scalar;
};

struct Path {
  std::size_t from = 0, to = 0;
  std::vector<std::size_t> edges;
};

enum class ParamMode { Symbolic, Sampled };

struct Certificate {
  long l1 = 0, l2 = 0;
  std::vector<SupportPoint> support;
  std::vector<Edge> edges;
  std::optional<std::size_t> basepoint;
  /// Paths to the basepoint followed by paths from it, one per other point.
  std::vector<Path> paths;
  std::vector<std::size_t> unreachable;
  ParamMode mode = ParamMode::Symbolic;

  bool zero() const { return support.empty(); }
  bool connected() const { return unreachable.empty(); }
  /// "zero", "connected" or "disconnected".
  std::string status() const;
};

Certificate certify(long l1, long l2, ParamMode mode = ParamMode::Symbolic);

struct CheckOutcome {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Re-validates support, edges, scalars and paths from scratch.
CheckOutcome check_certificate(const Certificate& c);

/// Human-readable replay of the certificate.
std::string transcript(const Certificate& c);

}  // namespace dlambda::cert
