#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "bst/bouncing_ball.hpp"
#include "bst/boundary.hpp"

namespace bst {

/// Which root of the vertex-curvature quadratic: Plus has a = −2cos(α/2)
/// (resp. −2cosh(α/2)), Minus the dual parameter −a.
enum class Branch { Plus, Minus };

std::string_view to_string(Branch branch);

/// Hessian at x = 0 of the length of the 2r-gon alternating between the
/// graphs of f_+ and f_−, from exact second derivatives of each chord.
Eigen::MatrixXd hessian_direct(const GraphJet& plus, const GraphJet& minus, double L, int r);

/// Same, for the symmetric jets with f″_+(0) = −(1 + a/2)/L.
Eigen::MatrixXd hessian_direct(double a, double L, int r);

/// Inverse Hessian entries from the Chebyshev closed form at parameter a.
/// Branch Minus returns the inverse for the dual parameter −a, which equals
/// −(−1)^{p−q} times the Plus table. Throws DegenerateDenominator when
/// T_{2r}(−a/2) = 1.
Eigen::MatrixXd inverse_entries(double a, double L, int r, Branch branch = Branch::Plus);

/// The angle form of the same table for a = −2cos(α/2) (elliptic) or
/// a = −2cosh(α/2) (hyperbolic).
Eigen::MatrixXd inverse_entries_angle(double alpha, StabilityKind kind, double L, int r);

/// a + 2cos(kπ/r), k = 0..2r−1: the spectrum of −L·H.
std::vector<double> normalized_eigenvalues(double a, int r);

/// Σ_q h^{1q}; equals −L/(a + 2). Throws DegenerateDenominator at a = −2.
double row_sum(double a, double L, int r);

/// G(r) = Σ_q (h^{1q})³ / (h^{11})².
double G_function(double a, double L, int r, Branch branch = Branch::Plus);

struct MaslovData {
  int signature = 0;
  int n_plus = 0;
  int n_minus = 0;
  /// m ≡ 6r + sgn (mod 8), in 0..7.
  int m = 0;
  std::complex<double> factor;
  /// The alternative m′ ≡ 2 n_+ (mod 8) and i^{n_+}.
  int m_alt = 0;
  std::complex<double> factor_alt;
  bool conventions_disagree = false;
};

/// Signature counts with zero tolerance 1e−10 times the largest |eigenvalue|.
/// Throws ZeroEigenvalue.
MaslovData signature_and_maslov(const std::vector<double>& eigenvalues, int r);

struct HessianData {
  int r = 0;
  /// Parameter of the domain whose Hessian this is.
  double a = 0.0;
  double L = 0.0;
  Eigen::MatrixXd H;
  Eigen::MatrixXd h_inv;
  std::vector<double> eigenvalues;
  MaslovData maslov;
  double G_value = 0.0;

  double h11() const { return h_inv(0, 0); }
  /// Σ_q h^{1q}, summed directly.
  double first_row_sum() const;
  /// Σ_q (h^{1q})³.
  double first_row_cubes() const;
};

/// Everything for the iterate γ^r of the orbit with parameter a.
HessianData hessian_data(double a, double L, int r);

struct BadSetReport {
  double identity_max_residual = 0.0;
  int identity_points = 0;
  std::vector<double> polynomial_roots{-2.0, -1.0, 0.0, 2.0};
  /// Roots in (−2, 2) of (G(1) − G(2)) with denominators cleared.
  std::vector<double> numeric_roots;
  double root_error = 0.0;
  bool passed = false;
};

/// (a³−2a)²(a³−8) − (a⁹−6a⁷−2a⁶+12a⁵) = 2a²(a+1)(a−2)³(a+2) at random
/// points, and the zero set of G(1) − G(2) on (−2, 2).
BadSetReport bad_set_polynomial_check(unsigned seed = 1);

/// (G(1) − G(2)) · 2(T_4(−a/2) − 1) U_3(−a/2)² / L, analytic across a = 0.
double cleared_G_difference(double a, double L = 1.0);

}  // namespace bst
