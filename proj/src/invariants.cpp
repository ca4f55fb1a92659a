#include "bst/invariants.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "bst/error.hpp"

namespace bst {

namespace {

double lookup(const std::map<int, double>& table, int key) {
  const auto it = table.find(key);
  return it == table.end() ? 1.0 : it->second;
}

}  // namespace

double InvariantConstants::c_tilde(int j) const { return lookup(C_tilde, j); }
double InvariantConstants::c(int j) const { return lookup(C, j); }
double InvariantConstants::c_hat(int j) const { return lookup(C_hat, j); }
double InvariantConstants::a_weight(int r) const { return lookup(A, r); }

double InvariantConstants::remainder_at(int r, int j, std::span<const double> jet) const {
  return remainder ? remainder(r, j, jet) : 0.0;
}

RemainderFunction quadratic_remainder(double weight) {
  return [weight](int r, int, std::span<const double> jet) {
    double acc = 0.0;
    for (double v : jet) acc += v * v;
    return weight * r * acc;
  };
}

std::string_view to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
}

PrefactorData prefactor(const StabilityData& stability, int r, BoundaryCondition bc, int maslov_m, double k) {
  if (r < 1) throw Error(ErrorCode::InvalidInput, "iterate r must be at least 1");
  PrefactorData out;
  out.boundary_condition = bc;
  out.r = r;
  out.epsilon = bc == BoundaryCondition::Dirichlet ? 2 * r : 0;
  out.maslov_m = maslov_m;
  out.length = 2.0 * stability.L * r;
  out.det_factor = std::abs(stability.det_I_minus_P(r));
  if (stability.kind == StabilityKind::Degenerate || out.det_factor < 1e-12)
    throw Error(ErrorCode::DegenerateOrbit, "det(I - P) vanishes for this iterate");
  const double sign = out.epsilon % 2 == 0 ? 1.0 : -1.0;
  const double phase = k * out.length + 0.25 * std::numbers::pi * maslov_m;
  out.value = sign * std::polar(1.0 / std::sqrt(out.det_factor), phase);
  return out;
}

InvariantData b_invariant(std::span<const double> jet, const HessianData& hess, const InvariantConstants& consts,
                          int j) {
  if (j < 2) throw Error(ErrorCode::InvalidInput, "j must be at least 2");
  if (jet.size() < static_cast<std::size_t>(2 * j + 1))
    throw Error(ErrorCode::InsufficientJet, "need derivatives up to order " + std::to_string(2 * j));
  const int r = hess.r;
  const double L = hess.L;
  const double h11 = hess.h11();
  const double s1 = hess.first_row_sum();
  const double s3 = hess.first_row_cubes();
  const double f2j = jet[2 * j];
  const double mixed = jet[3] * jet[2 * j - 1];
  const double A = consts.a_weight(r);
  const double hj = std::pow(h11, j);
  const double hj2 = std::pow(h11, j - 2);

  InvariantData out;
  out.r = r;
  out.j = j;
  out.h11_squared = h11 * h11;
  out.row_cubes = s3;

  const double norm = 8.0 * L * r * r * A * hj2;
  out.remainder_normalized = consts.remainder_at(r, j, jet.subspan(0, 2 * j - 1));
  const double core = 2.0 * r * consts.c_tilde(j) * hj * f2j + 8.0 * r * consts.c(j) * hj * s1 * mixed +
                      8.0 * r * consts.c_hat(j) * hj2 * s3 * mixed;
  out.b = 4.0 * L * r * A * core + norm * out.remainder_normalized;

  const double s1_closed = -L / (hess.a + 2.0);
  out.coeff_top = consts.c_tilde(j) * out.h11_squared;
  out.coeff_mixed = 4.0 * consts.c(j) * out.h11_squared * s1_closed + 4.0 * consts.c_hat(j) * s3;
  out.b_prime = out.coeff_top * f2j + out.coeff_mixed * mixed + out.remainder_normalized;
  out.b_prime_direct = out.b / norm;
  return out;
}

DecouplingSystem decoupling_system(const HessianData& r1, const HessianData& r2, const InvariantConstants& consts,
                                   int j) {
  DecouplingSystem out;
  out.j = j;
  for (int row = 0; row < 2; ++row) {
    const HessianData& h = row == 0 ? r1 : r2;
    const double h11sq = h.h11() * h.h11();
    out.matrix(row, 0) = consts.c_tilde(j) * h11sq;
    out.matrix(row, 1) = 4.0 * consts.c(j) * h11sq * (-h.L / (h.a + 2.0)) + 4.0 * consts.c_hat(j) * h.first_row_cubes();
  }
  out.determinant = out.matrix.determinant();
  out.relative_determinant = std::abs(out.determinant) / (out.matrix.row(0).norm() * out.matrix.row(1).norm());
  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(out.matrix);
  const auto& sv = svd.singularValues();
  out.condition_number = sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
  if (!(out.relative_determinant >= 1e-12))
    throw Error(ErrorCode::BadSetSingular, "decoupling determinant vanishes (G(1) = G(2))");
  return out;
}

}  // namespace bst
