#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bst/boundary.hpp"

namespace bst {

/// Boundary point (arclength s) and outgoing angle φ ∈ (0, π) measured from
/// the counterclockwise tangent. The symplectic chart is (s, cos φ).
struct PhasePoint {
  double s = 0.0;
  double phi = 0.0;

  double momentum() const { return std::cos(phi); }
};

/// q boundary points given by arclength parameters.
struct ConfigurationPoint {
  std::vector<double> s;

  int bounces() const { return static_cast<int>(s.size()); }
  /// Smallest cyclic gap between consecutive points, measured on ℝ/Pℤ.
  double clearance(double perimeter) const;
};

struct LengthEvaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Total length Σ ‖α(s_{j+1}) − α(s_j)‖ with exact first and second
/// derivatives of the chord formula. Throws OnCoincidenceSet.
LengthEvaluation length_functional(const BoundaryGeometry& geom, const ConfigurationPoint& config);

/// First and second derivatives of one chord d = ‖b − a‖ with respect to the
/// two curve parameters, given position, first and second parameter
/// derivatives of each endpoint.
struct ChordDerivatives {
  double length = 0.0;
  double d_a = 0.0;
  double d_b = 0.0;
  double d_aa = 0.0;
  double d_ab = 0.0;
  double d_bb = 0.0;
};
ChordDerivatives chord_derivatives(const Vec2& a, const Vec2& a1, const Vec2& a2, const Vec2& b, const Vec2& b1,
                                   const Vec2& b2);

struct BilliardMapOptions {
  double grazing_tolerance = 1e-8;
  int scan_samples = 512;
};

/// One reflection. Throws GrazingRay when the start or the landing angle is
/// within tolerance of the tangent.
PhasePoint billiard_map(const BoundaryGeometry& geom, const PhasePoint& x, const BilliardMapOptions& options = {});

struct PeriodicOrbit {
  ConfigurationPoint config;
  double length = 0.0;
  int p = 0;
  int q = 0;
  double gradient_norm = 0.0;
  double hessian_det = 0.0;
  /// Smallest |eigenvalue| / largest |eigenvalue| of the Hessian.
  double hessian_rank_ratio = 0.0;
  bool nondegenerate = true;
  /// Rank-deficient Hessian: a member of a continuous family of orbits.
  bool degenerate_family = false;
  std::string orbit_class;
  /// Outgoing angle at each vertex.
  std::vector<double> angles;
};

struct OrbitSearchConfig {
  int starts_per_winding = 24;
  std::uint64_t seed = 0;
  /// C in the clearance floor C/q; non-positive selects min(0.1 P, 1/κ_max).
  double clearance_constant = 0.0;
  int max_newton_iterations = 80;
  double gradient_tolerance = 1e-11;  ///< relative to the perimeter
  double rank_tolerance = 1e-8;
  /// Worker cap; 0 means BST_THREADS or hardware concurrency.
  int threads = 0;
};

struct OrbitSearchResult {
  std::vector<PeriodicOrbit> orbits;
  int starts = 0;
  /// Starts that failed to converge (NoConvergence, not fatal).
  int failed_starts = 0;
  double clearance_floor = 0.0;
};

/// Multistart deflated Newton on ∇L^{(q)}, deduplicated modulo cyclic shifts
/// and reversal. Degenerate families are reported once per (p, length).
OrbitSearchResult find_orbits(const BoundaryGeometry& geom, int q, std::optional<int> p_filter = std::nullopt,
                              const OrbitSearchConfig& config = {});

struct SpectrumEntry {
  double length = 0.0;
  int multiplicity = 0;
  std::vector<PeriodicOrbit> orbits;
};

struct LengthSpectrum {
  std::vector<SpectrumEntry> entries;
  double tolerance = 0.0;
  int q_max = 0;
  int starts_per_winding = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  /// Entry whose length is within `tolerance` of `length`, if any.
  const SpectrumEntry* find(double length) const;
};

LengthSpectrum length_spectrum(const BoundaryGeometry& geom, int q_max, double tolerance,
                               const OrbitSearchConfig& config = {});

struct LazutkinLink {
  int p = 0;
  int q = 0;
  double arc = 0.0;
  double phi = 0.0;
  double phi_next = 0.0;
  double lower = 0.0;  ///< 2φ / κ_max
  double upper = 0.0;  ///< 2φ / κ_min
  bool holds = false;
  bool symmetric_holds = false;  ///< same bounds with (φ + φ')/2
};

struct Condition4Report {
  double half_length = 0.0;
  double perimeter = 0.0;
  int q_max = 0;
  int multiplicity_2L = 0;
  int multiplicity_4L = 0;
  bool perimeter_distinct = false;  ///< 4L != P
  bool passed = false;
  std::vector<std::string> violations;
  std::vector<PeriodicOrbit> collisions;
  /// Heuristic bound on the bounce number of orbits of length 2L or 4L,
  /// from the curvature bounds; not certified.
  double heuristic_bounce_bound = 0.0;
  std::vector<LazutkinLink> lazutkin;
  bool lazutkin_holds = true;
  LengthSpectrum spectrum;
};

/// Checks that 2L and 4L are simple in the computed spectrum up to q_max and
/// that 4L differs from the perimeter. `half_length` is L (vertex separation).
Condition4Report check_condition4(const BoundaryGeometry& geom, double half_length, int q_max,
                                  double tolerance = 1e-9, const OrbitSearchConfig& config = {});

/// Lazutkin bounds 2φ/κ_max ≤ |s' − s| ≤ 2φ/κ_min for every link of `orbit`.
std::vector<LazutkinLink> lazutkin_links(const BoundaryGeometry& geom, const PeriodicOrbit& orbit,
                                         double slack = 1e-9);

/// Outgoing angle of each link of a closed polygon inscribed in the boundary.
std::vector<double> reflection_angles(const BoundaryGeometry& geom, const ConfigurationPoint& config);

}  // namespace bst
