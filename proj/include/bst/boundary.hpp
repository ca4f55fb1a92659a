#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "bst/series.hpp"

namespace bst {

using Vec2 = Eigen::Vector2d;

/// One term c cos(kθ) + s sin(kθ) of the radial function.
struct FourierMode {
  int freq = 0;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

/// A star-shaped, centrally symmetric boundary r(θ) written as a finite
/// Fourier series with even frequencies only. The physical curve is
/// α(θ) = r(θ) (cos(θ + rotation), sin(θ + rotation)).
struct BoundarySpec {
  std::string label;
  std::vector<FourierMode> radial_coeffs;
  double rotation = 0.0;

  static BoundarySpec circle(double radius);
  /// Semi-axis `a` along x and `b` along y. The radial Fourier series of an
  /// ellipse is infinite; it is summed analytically and truncated once the
  /// coefficients drop below 1e-40 relative.
  static BoundarySpec ellipse(double a, double b);
};

/// Radial function and its θ-derivatives, evaluated exactly from the modes.
class RadialFunction {
 public:
  explicit RadialFunction(std::vector<FourierMode> modes) : modes_(std::move(modes)) {}

  /// r^{(k)}(θ).
  double operator()(double theta, int deriv = 0) const;
  /// Taylor series of t -> r(θ + t) up to `order`.
  Series taylor(double theta, std::size_t order) const;
  const std::vector<FourierMode>& modes() const noexcept { return modes_; }

 private:
  std::vector<FourierMode> modes_;
};

/// Arclength position, unit tangent and acceleration (κ times inward normal)
/// of the boundary at one point.
struct CurvePoint {
  Vec2 position;
  Vec2 tangent;
  Vec2 accel;
  double theta = 0.0;
};

struct GeometryOptions {
  int curvature_samples = 4096;
  int curvature_refinements = 3;
};

/// Validated boundary with precomputed perimeter, arclength map and
/// curvature bounds. Immutable after construction; safe to share between
/// threads.
class BoundaryGeometry {
 public:
  const BoundarySpec& spec() const noexcept { return spec_; }
  const RadialFunction& radial() const noexcept { return radial_; }

  double perimeter() const noexcept { return perimeter_; }
  double curvature_min() const noexcept { return kappa_min_; }
  double curvature_max() const noexcept { return kappa_max_; }
  bool convex() const noexcept { return kappa_min_ > 0.0; }

  /// Curve data in the polar parameter θ.
  Vec2 point(double theta) const;
  Vec2 d1(double theta) const;
  Vec2 d2(double theta) const;
  double speed(double theta) const;
  double curvature_at_angle(double theta) const;

  /// Monotone lift θ -> s with s(0) = 0 and s(θ + 2π) = s(θ) + P.
  double arclength_of_angle(double theta) const;
  /// Inverse of arclength_of_angle, returning θ in the lift matching s.
  double angle_of_arclength(double s) const;

  double curvature(double s) const;
  CurvePoint at_arclength(double s) const;

 private:
  friend BoundaryGeometry validate_spec(const BoundarySpec& spec, const GeometryOptions& options);
  BoundaryGeometry(BoundarySpec spec) : spec_(std::move(spec)), radial_(spec_.radial_coeffs) {}

  BoundarySpec spec_;
  RadialFunction radial_;
  double perimeter_ = 0.0;
  double kappa_min_ = 0.0;
  double kappa_max_ = 0.0;
  // speed(θ) ≈ mean + Σ a_k cos kθ + b_k sin kθ
  double speed_mean_ = 0.0;
  std::vector<double> speed_cos_;
  std::vector<double> speed_sin_;
};

/// Checks the boundary hypotheses and builds the geometry.
/// Throws OddModePresent, NotEmbedded, NotStarShaped or InvalidInput.
BoundaryGeometry validate_spec(const BoundarySpec& spec, const GeometryOptions& options = {});

enum class Side { Plus, Minus };

/// Derivatives f^{(k)}(0), k = 0..K, of the local graph y = f(x) through a
/// vertex in a rotated frame.
struct GraphJet {
  Side side = Side::Plus;
  std::vector<double> derivatives;

  std::size_t order() const noexcept { return derivatives.empty() ? 0 : derivatives.size() - 1; }
  double operator[](std::size_t k) const { return derivatives.at(k); }
};

/// Frame rotation that places the boundary point at polar parameter θ on
/// the positive y-axis.
double vertical_frame_rotation(const BoundaryGeometry& geom, double theta);

/// Local graph jet at the boundary point with polar parameter `vertex_theta`,
/// seen in the frame obtained by rotating the physical plane by
/// `frame_rotation`. Computed by series reversion, exact to truncation order.
/// Throws NotAGraph when the tangent is vertical in that frame.
GraphJet extract_graph_jet(const BoundaryGeometry& geom, double vertex_theta, double frame_rotation,
                           std::size_t order);

/// Convenience overload using vertical_frame_rotation(geom, vertex_theta).
GraphJet extract_graph_jet(const BoundaryGeometry& geom, double vertex_theta, std::size_t order);

}  // namespace bst
