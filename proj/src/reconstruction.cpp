#include "bst/reconstruction.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "bst/error.hpp"

namespace bst {

namespace {

int predicted_signature(double a, int r) {
  return signature_and_maslov(normalized_eigenvalues(a, r), r).signature;
}

}  // namespace

CurvatureChoice disambiguate_curvature(double alpha, StabilityKind kind, double L,
                                       const std::map<int, int>& signatures) {
  if (kind == StabilityKind::Degenerate) throw Error(ErrorCode::DegenerateOrbit, "degenerate orbit");
  const int r = kind == StabilityKind::Elliptic ? 2 : 1;
  const auto observed = signatures.find(r);
  if (observed == signatures.end())
    throw Error(ErrorCode::InvalidInput, "signature for r = " + std::to_string(r) + " is required");

  const auto [f_plus, f_minus] = curvature_branches(alpha, kind, L);
  std::vector<CurvatureChoice> matches;
  for (const auto& [f2, branch] : {std::pair{f_plus, Branch::Plus}, std::pair{f_minus, Branch::Minus}}) {
    const double a = -2.0 * (1.0 + L * f2);
    try {
      if (predicted_signature(a, r) == observed->second) matches.push_back({f2, branch, a});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroEigenvalue) throw;
    }
  }
  if (matches.size() == 2 && std::abs(matches[0].f2 - matches[1].f2) <= 1e-14 * std::max(1.0, std::abs(f_plus)))
    matches.pop_back();
  if (matches.size() != 1) {
    throw Error(ErrorCode::InconsistentSignature, "signature " + std::to_string(observed->second) + " at r = " +
                                                      std::to_string(r) + " matches " +
                                                      std::to_string(matches.size()) + " branches");
  }
  return matches.front();
}

ReconstructionResult recover_jet(const SpectralData& data, const InvariantConstants& consts, int J,
                                 const ReconstructionOptions& options) {
  if (J < 2) throw Error(ErrorCode::InvalidInput, "J must be at least 2");
  const CurvatureChoice choice = disambiguate_curvature(data.alpha, data.kind, data.L, data.signatures);
  const double L = data.L;
  const HessianData hess[2] = {hessian_data(choice.a, L, 1), hessian_data(choice.a, L, 2)};

  ReconstructionResult out;
  out.branch = choice.branch;
  out.a = choice.a;
  out.jets.assign(2 * J + 1, 0.0);
  out.jets[0] = 0.5 * L;
  out.jets[2] = choice.f2;

  for (int j = 2; j <= J; ++j) {
    const DecouplingSystem system = decoupling_system(hess[0], hess[1], consts, j);
    out.worst_condition = std::max(out.worst_condition, system.condition_number);
    Eigen::Vector2d rhs;
    for (int r = 1; r <= 2; ++r) {
      const auto it = data.b_prime.find({r, j});
      if (it == data.b_prime.end())
        throw Error(ErrorCode::InvalidInput, "missing b' for r = " + std::to_string(r) + ", j = " + std::to_string(j));
      const std::span<const double> known(out.jets.data(), 2 * j - 1);
      rhs[r - 1] = it->second - consts.remainder_at(r, j, known);
    }
    const Eigen::Vector2d sol = system.matrix.partialPivLu().solve(rhs);
    out.jets[2 * j] = sol[0];
    if (j == 2) {
      if (!(sol[1] > options.third_derivative_tolerance))
        throw Error(ErrorCode::VanishingThirdDerivative, "(f''')^2 = " + std::to_string(sol[1]));
      out.jets[3] = std::sqrt(sol[1]);
    } else {
      out.jets[2 * j - 1] = sol[1] / out.jets[3];
    }
  }
  return out;
}

SpectralData synthesize_spectral_data(std::span<const double> jet, const InvariantConstants& consts, int J) {
  if (jet.size() < static_cast<std::size_t>(2 * J + 1))
    throw Error(ErrorCode::InsufficientJet, "need derivatives up to order " + std::to_string(2 * J));
  SpectralData data;
  data.L = 2.0 * jet[0];
  const double c = 1.0 + data.L * jet[2];
  if (std::abs(std::abs(c) - 1.0) < 1e-14) throw Error(ErrorCode::DegenerateOrbit, "|1 + L f''| = 1");
  if (std::abs(c) < 1.0) {
    data.kind = StabilityKind::Elliptic;
    data.alpha = 2.0 * std::acos(std::abs(c));
  } else {
    data.kind = StabilityKind::Hyperbolic;
    data.alpha = 2.0 * std::acosh(std::abs(c));
  }
  const double a = -2.0 * c;
  for (int r = 1; r <= 2; ++r) {
    const HessianData hess = hessian_data(a, data.L, r);
    data.signatures[r] = hess.maslov.signature;
    for (int j = 2; j <= J; ++j) data.b_prime[{r, j}] = b_invariant(jet, hess, consts, j).b_prime;
  }
  return data;
}

std::string_view to_string(JetVerdict verdict) {
  switch (verdict) {
    case JetVerdict::Equal: return "equal";
    case JetVerdict::ReflectionEquivalent: return "reflection-equivalent";
    case JetVerdict::Distinct: return "distinct";
  }
  return "unknown";
}

JetVerdict compare_domains(const ReconstructionResult& f, const ReconstructionResult& g, double tol) {
  const std::size_t n = std::min(f.jets.size(), g.jets.size());
  bool equal = true;
  bool reflected = true;
  for (std::size_t k = 2; k < n; ++k) {
    const double scale = std::max({1.0, std::abs(f.jets[k]), std::abs(g.jets[k])});
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    equal = equal && std::abs(f.jets[k] - g.jets[k]) <= tol * scale;
    reflected = reflected && std::abs(f.jets[k] - sign * g.jets[k]) <= tol * scale;
  }
  if (equal) return JetVerdict::Equal;
  if (reflected) return JetVerdict::ReflectionEquivalent;
  return JetVerdict::Distinct;
}

}  // namespace bst
