#include "bst/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "bst/error.hpp"

namespace bst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double wrap_positive(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

}  // namespace

double ConfigurationPoint::clearance(double perimeter) const {
  double gap = std::numeric_limits<double>::infinity();
  const std::size_t n = s.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double d = wrap_positive(s[(j + 1) % n] - s[j], perimeter);
    gap = std::min(gap, std::min(d, perimeter - d));
  }
  return gap;
}

ChordDerivatives chord_derivatives(const Vec2& a, const Vec2& a1, const Vec2& a2, const Vec2& b, const Vec2& b1,
                                   const Vec2& b2) {
  const Vec2 v = b - a;
  ChordDerivatives out;
  out.length = v.norm();
  const Vec2 u = v / out.length;
  const Eigen::Matrix2d proj = Eigen::Matrix2d::Identity() - u * u.transpose();
  out.d_a = -u.dot(a1);
  out.d_b = u.dot(b1);
  out.d_aa = a1.dot(proj * a1) / out.length - u.dot(a2);
  out.d_bb = b1.dot(proj * b1) / out.length + u.dot(b2);
  out.d_ab = -a1.dot(proj * b1) / out.length;
  return out;
}

LengthEvaluation length_functional(const BoundaryGeometry& geom, const ConfigurationPoint& config) {
  const int q = config.bounces();
  if (q < 2) throw Error(ErrorCode::InvalidInput, "length functional needs at least two points");
  if (!(config.clearance(geom.perimeter()) > 1e-14 * geom.perimeter()))
    throw Error(ErrorCode::OnCoincidenceSet, "consecutive configuration points coincide");

  std::vector<CurvePoint> pts;
  pts.reserve(q);
  for (double s : config.s) pts.push_back(geom.at_arclength(s));

  LengthEvaluation out;
  out.gradient = Eigen::VectorXd::Zero(q);
  out.hessian = Eigen::MatrixXd::Zero(q, q);
  for (int j = 0; j < q; ++j) {
    const int k = (j + 1) % q;
    const auto& a = pts[j];
    const auto& b = pts[k];
    const ChordDerivatives c = chord_derivatives(a.position, a.tangent, a.accel, b.position, b.tangent, b.accel);
    out.value += c.length;
    out.gradient[j] += c.d_a;
    out.gradient[k] += c.d_b;
    out.hessian(j, j) += c.d_aa;
    out.hessian(k, k) += c.d_bb;
    out.hessian(j, k) += c.d_ab;
    out.hessian(k, j) += c.d_ab;
  }
  return out;
}

PhasePoint billiard_map(const BoundaryGeometry& geom, const PhasePoint& x, const BilliardMapOptions& options) {
  if (!(std::sin(x.phi) > options.grazing_tolerance))
    throw Error(ErrorCode::GrazingRay, "start angle is tangent to the boundary");

  const CurvePoint start = geom.at_arclength(x.s);
  const Vec2 inward(-start.tangent.y(), start.tangent.x());
  const Vec2 dir = std::cos(x.phi) * start.tangent + std::sin(x.phi) * inward;
  const double theta0 = start.theta;

  // cross(dir, α(θ) − p0) vanishes at θ0 and θ0 + 2π; dividing by
  // sin((θ − θ0)/2) removes those trivial zeros. The limit at θ0 is
  // 2 cross(dir, α'(θ0)).
  auto reduced = [&](double theta) {
    const double half = 0.5 * (theta - theta0);
    if (std::abs(half) < 1e-300) return 2.0 * cross(dir, geom.d1(theta0));
    return cross(dir, geom.point(theta) - start.position) / std::sin(half);
  };

  const int n = options.scan_samples;
  const double h = kTwoPi / n;
  double best_t = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  double prev_theta = theta0;
  double prev_val = reduced(theta0);
  for (int i = 1; i < n; ++i) {
    const double theta = theta0 + i * h;
    const double val = reduced(theta);
    if ((prev_val < 0.0) != (val < 0.0) || val == 0.0) {
      double root = theta;
      if (val != 0.0) {
        std::uintmax_t max_iter = 200;
        const auto bracket = boost::math::tools::toms748_solve(
            reduced, prev_theta, theta, prev_val, val, boost::math::tools::eps_tolerance<double>(52), max_iter);
        root = 0.5 * (bracket.first + bracket.second);
      }
      const double t = dir.dot(geom.point(root) - start.position);
      if (t > 1e-12 * geom.perimeter() && t < best_t) {
        best_t = t;
        best_theta = root;
      }
    }
    prev_theta = theta;
    prev_val = val;
  }
  if (!std::isfinite(best_t)) throw Error(ErrorCode::GrazingRay, "no transversal intersection found");

  const Vec2 tangent = geom.d1(best_theta).normalized();
  const Vec2 normal(-tangent.y(), tangent.x());
  const Vec2 reflected = dir - 2.0 * dir.dot(normal) * normal;
  PhasePoint out;
  out.phi = std::atan2(reflected.dot(normal), reflected.dot(tangent));
  out.s = wrap_positive(geom.arclength_of_angle(best_theta), geom.perimeter());
  if (!(std::sin(out.phi) > options.grazing_tolerance))
    throw Error(ErrorCode::GrazingRay, "landing angle is tangent to the boundary");
  return out;
}

std::vector<double> reflection_angles(const BoundaryGeometry& geom, const ConfigurationPoint& config) {
  const std::size_t q = config.s.size();
  std::vector<CurvePoint> pts;
  for (double s : config.s) pts.push_back(geom.at_arclength(s));
  std::vector<double> angles(q);
  for (std::size_t j = 0; j < q; ++j) {
    const Vec2 dir = (pts[(j + 1) % q].position - pts[j].position).normalized();
    const Vec2 inward(-pts[j].tangent.y(), pts[j].tangent.x());
    angles[j] = std::atan2(dir.dot(inward), dir.dot(pts[j].tangent));
  }
  return angles;
}

std::vector<LazutkinLink> lazutkin_links(const BoundaryGeometry& geom, const PeriodicOrbit& orbit, double slack) {
  const auto& s = orbit.config.s;
  const std::size_t q = s.size();
  const double P = geom.perimeter();
  const std::vector<double> angles = orbit.angles.size() == q ? orbit.angles : reflection_angles(geom, orbit.config);
  std::vector<LazutkinLink> out;
  for (std::size_t j = 0; j < q; ++j) {
    LazutkinLink link;
    link.p = orbit.p;
    link.q = orbit.q;
    const double phi = angles[j];
    const double phi_next = angles[(j + 1) % q];
    const bool forward = phi <= 0.5 * kPi;
    link.phi = forward ? phi : kPi - phi;
    link.phi_next = forward ? phi_next : kPi - phi_next;
    link.arc = forward ? wrap_positive(s[(j + 1) % q] - s[j], P) : wrap_positive(s[j] - s[(j + 1) % q], P);
    link.lower = 2.0 * link.phi / geom.curvature_max();
    link.upper = 2.0 * link.phi / geom.curvature_min();
    link.holds = link.arc >= link.lower - slack && link.arc <= link.upper + slack;
    const double mean_phi = 0.5 * (link.phi + link.phi_next);
    link.symmetric_holds =
        link.arc >= 2.0 * mean_phi / geom.curvature_max() - slack && link.arc <= 2.0 * mean_phi / geom.curvature_min() + slack;
    out.push_back(link);
  }
  return out;
}

}  // namespace bst
