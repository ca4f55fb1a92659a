#pragma once

#include <map>
#include <utility>
#include <vector>

#include "bst/bouncing_ball.hpp"
#include "bst/hessian.hpp"
#include "bst/invariants.hpp"

namespace bst {

/// Spectral input of the inverse problem for one bouncing ball orbit.
struct SpectralData {
  double L = 0.0;
  StabilityKind kind = StabilityKind::Elliptic;
  double alpha = 0.0;
  /// r -> signature of the normalized Hessian of γ^r, r ∈ {1, 2}.
  std::map<int, int> signatures;
  /// (r, j) -> b′_{γ^r, j}
  std::map<std::pair<int, int>, double> b_prime;
};

struct CurvatureChoice {
  double f2 = 0.0;
  Branch branch = Branch::Plus;
  double a = 0.0;
};

/// Picks the root of the vertex-curvature quadratic whose predicted Hessian
/// signature matches the observed one (r = 2 elliptic, r = 1 hyperbolic).
/// Throws InconsistentSignature.
CurvatureChoice disambiguate_curvature(double alpha, StabilityKind kind, double L, const std::map<int, int>& signatures);

struct ReconstructionResult {
  /// f^{(k)}(0), k = 0..2J, with f(0) = L/2 and f′(0) = 0.
  std::vector<double> jets;
  Branch branch = Branch::Plus;
  /// f‴(0) > 0 was imposed (the reflection x -> −x is not determined).
  bool sign_convention = true;
  double a = 0.0;
  /// Largest decoupling condition number over the stages.
  double worst_condition = 0.0;
};

struct ReconstructionOptions {
  double third_derivative_tolerance = 1e-12;
};

/// Inductive recovery of the Taylor jet from b′_{γ^r, j}, r = 1, 2, j = 2..J.
/// Throws BadSetSingular or VanishingThirdDerivative.
ReconstructionResult recover_jet(const SpectralData& data, const InvariantConstants& consts, int J,
                                 const ReconstructionOptions& options = {});

/// Forward map: the spectral data a boundary with top-graph jet `jet`
/// (f^{(k)}(0), k = 0..2J, f′(0) = 0) would produce.
SpectralData synthesize_spectral_data(std::span<const double> jet, const InvariantConstants& consts, int J);

enum class JetVerdict { Equal, ReflectionEquivalent, Distinct };

std::string_view to_string(JetVerdict verdict);

/// Compares derivatives of order ≥ 2 with relative tolerance `tol`.
JetVerdict compare_domains(const ReconstructionResult& f, const ReconstructionResult& g, double tol);

}  // namespace bst
