#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bst/billiard.hpp"
#include "bst/boundary.hpp"

namespace bst {

enum class StabilityKind { Elliptic, Hyperbolic, Degenerate };

std::string_view to_string(StabilityKind kind);

/// Linearized two-bounce return map of a bouncing ball orbit.
struct StabilityData {
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Zero();  ///< in (s, φ) coordinates
  double trace = 0.0;
  double det = 0.0;
  StabilityKind kind = StabilityKind::Degenerate;
  /// Rotation angle in (0, π] (elliptic) or expansion exponent > 0 (hyperbolic).
  double alpha = 0.0;
  double L = 0.0;
  /// a = −2(1 + L f″_+(0)).
  double a = 0.0;
  /// 2(2(1 + L f″_+)² − 1), the trace predicted by the vertex curvature.
  double jet_trace = 0.0;

  /// 2 − 2cos(rα) or 2 − 2cosh(rα).
  double det_I_minus_P(int r) const;
  /// det(I − M^r) from the finite-difference matrix.
  double det_I_minus_P_matrix(int r) const;
};

struct BouncingBallData {
  /// Vertex separation; the orbit has length 2L.
  double L = 0.0;
  /// Polar parameter of the upper vertex A; B sits at theta + π.
  double theta = 0.0;
  /// Rotation that puts A on the positive y-axis.
  double frame_rotation = 0.0;
  Vec2 vertex_a = Vec2::Zero();
  Vec2 vertex_b = Vec2::Zero();
  GraphJet plus;
  GraphJet minus;
  /// Largest |⟨chord, tangent⟩| over the two vertices (unit vectors).
  double orthogonality = 0.0;
  /// Every diameter is critical (rotationally symmetric boundary).
  bool degenerate_family = false;
  std::optional<StabilityData> stability;
};

struct BouncingBallOptions {
  std::size_t jet_order = 12;
  int scan_samples = 2048;
};

/// All σ-invariant bouncing ball orbits: critical points of r(θ) on [0, π),
/// sorted by θ. Throws NoneFound if none is located.
std::vector<BouncingBallData> detect_bouncing_balls(const BoundaryGeometry& geom,
                                                    const BouncingBallOptions& options = {});

/// Builds the orbit data at a given critical angle of r(θ).
BouncingBallData bouncing_ball_at(const BoundaryGeometry& geom, double theta, std::size_t jet_order = 12);

struct PoincareOptions {
  double relative_step = 1e-5;
  int richardson_levels = 2;
  double degeneracy_tolerance = 1e-8;
};

/// Central differences of the two-bounce billiard map at (s_A, π/2) with
/// Richardson extrapolation. Throws DegenerateOrbit when |2 − |trace|| is below
/// tolerance.
StabilityData poincare_map(const BoundaryGeometry& geom, const BouncingBallData& bb,
                           const PoincareOptions& options = {});

/// The two vertex curvatures sharing the Poincaré eigenvalues:
/// ((−1 + c)/L, (−1 − c)/L) with c = cos(α/2) or cosh(α/2).
std::pair<double, double> curvature_branches(double alpha, StabilityKind kind, double L);

struct ConditionResult {
  std::string name;
  bool evaluated = false;
  bool passed = false;
  double margin = 0.0;
  std::string detail;
};

struct DomainConditionReport {
  BouncingBallData orbit;
  std::array<ConditionResult, 4> conditions;
  std::optional<Condition4Report> condition4;
  bool passed = false;
};

struct DomainConditionOptions {
  double bad_set_tolerance = 1e-8;
  double third_derivative_tolerance = 1e-8;
  double spectrum_tolerance = 1e-9;
  OrbitSearchConfig search;
};

/// Conditions (1) nondegeneracy, (2) cos(α/2) ∉ {0, 1/2, 1} for elliptic
/// orbits, (3) f‴(0) ≠ 0, (4) simple lengths 2L and 4L.
DomainConditionReport check_domain_conditions(const BoundaryGeometry& geom, const BouncingBallData& bb, int q_max,
                                              const DomainConditionOptions& options = {});

}  // namespace bst
