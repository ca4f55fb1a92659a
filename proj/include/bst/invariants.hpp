#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>

#include <Eigen/Core>

#include "bst/bouncing_ball.hpp"
#include "bst/hessian.hpp"

namespace bst {

/// Remainder term of b_{γ^r, j} in normalized units: b receives
/// 8 L r² 𝓐(r) (h^{11})^{j−2} · R(r, j, jet), so R adds directly to b′.
/// `jet` holds f^{(0..2j−2)}(0).
using RemainderFunction = std::function<double(int r, int j, std::span<const double> jet)>;

/// Combinatorial weights of the wave invariants. Missing entries read as 1;
/// the remainder defaults to zero.
struct InvariantConstants {
  std::map<int, double> C_tilde;
  std::map<int, double> C;
  std::map<int, double> C_hat;
  /// r -> 𝓐(r)
  std::map<int, double> A;
  RemainderFunction remainder;

  double c_tilde(int j) const;
  double c(int j) const;
  double c_hat(int j) const;
  double a_weight(int r) const;
  double remainder_at(int r, int j, std::span<const double> jet) const;
};

/// R = weight · r · Σ_k jet_k², a simple nonzero plug-in.
RemainderFunction quadratic_remainder(double weight);

enum class BoundaryCondition { Dirichlet, Neumann };

std::string_view to_string(BoundaryCondition bc);

struct PrefactorData {
  BoundaryCondition boundary_condition = BoundaryCondition::Dirichlet;
  int r = 1;
  /// Signed count of boundary intersections: 2r (Dirichlet) or 0 (Neumann).
  int epsilon = 0;
  int maslov_m = 0;
  double length = 0.0;
  double det_factor = 0.0;  ///< |det(I − P_{γ^r})|
  std::complex<double> value;
};

/// (−1)^ε e^{ik·2Lr} e^{iπm/4} / sqrt|det(I − P_{γ^r})|. Throws DegenerateOrbit.
PrefactorData prefactor(const StabilityData& stability, int r, BoundaryCondition bc, int maslov_m, double k);

struct InvariantData {
  int r = 0;
  int j = 0;
  double b = 0.0;
  /// b / (8 L r² 𝓐(r) (h^{11})^{j−2}) with Σ_q h^{1q} = −L/(a + 2).
  double b_prime = 0.0;
  /// Same normalization, with Σ_q h^{1q} summed from the table.
  double b_prime_direct = 0.0;
  double h11_squared = 0.0;
  double row_cubes = 0.0;
  /// b′ = coeff_top · f^{(2j)} + coeff_mixed · f‴ f^{(2j−1)} + remainder_normalized.
  double coeff_top = 0.0;
  double coeff_mixed = 0.0;
  double remainder_normalized = 0.0;
};

/// b_{γ^r, j} from the derivatives f^{(k)}_+(0), k = 0..2j, and the Hessian
/// data of γ^r. Throws InsufficientJet.
InvariantData b_invariant(std::span<const double> jet, const HessianData& hess, const InvariantConstants& consts,
                          int j);

struct DecouplingSystem {
  int j = 0;
  /// Rows r = 1, 2; columns (f^{(2j)}, f‴ f^{(2j−1)}).
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Zero();
  double determinant = 0.0;
  double relative_determinant = 0.0;
  double condition_number = 0.0;
};

/// Throws BadSetSingular when the relative determinant is below 1e−12.
DecouplingSystem decoupling_system(const HessianData& r1, const HessianData& r2, const InvariantConstants& consts,
                                   int j);

}  // namespace bst
