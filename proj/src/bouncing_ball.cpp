#include "bst/bouncing_ball.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>
#include <boost/math/tools/toms748_solve.hpp>

#include "bst/error.hpp"

namespace bst {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_positive(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

double wrap_centered(double x, double period) { return x - period * std::round(x / period); }

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace

std::string_view to_string(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::Elliptic: return "elliptic";
    case StabilityKind::Hyperbolic: return "hyperbolic";
    case StabilityKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

double StabilityData::det_I_minus_P(int r) const {
  switch (kind) {
    case StabilityKind::Elliptic: return 2.0 - 2.0 * std::cos(r * alpha);
    case StabilityKind::Hyperbolic: return 2.0 - 2.0 * std::cosh(r * alpha);
    case StabilityKind::Degenerate: return 0.0;
  }
  return 0.0;
}

double StabilityData::det_I_minus_P_matrix(int r) const {
  Eigen::Matrix2d power = Eigen::Matrix2d::Identity();
  for (int i = 0; i < r; ++i) power = power * matrix;
  return (Eigen::Matrix2d::Identity() - power).determinant();
}

BouncingBallData bouncing_ball_at(const BoundaryGeometry& geom, double theta, std::size_t jet_order) {
  BouncingBallData bb;
  bb.theta = theta;
  bb.L = geom.radial()(theta) + geom.radial()(theta + kPi);
  bb.frame_rotation = vertical_frame_rotation(geom, theta);
  bb.vertex_a = rotate(geom.point(theta), bb.frame_rotation);
  bb.vertex_b = rotate(geom.point(theta + kPi), bb.frame_rotation);
  bb.plus = extract_graph_jet(geom, theta, bb.frame_rotation, jet_order);
  bb.minus = extract_graph_jet(geom, theta + kPi, bb.frame_rotation, jet_order);

  const Vec2 chord = (geom.point(theta + kPi) - geom.point(theta)).normalized();
  bb.orthogonality = std::max(std::abs(chord.dot(geom.d1(theta).normalized())),
                              std::abs(chord.dot(geom.d1(theta + kPi).normalized())));
  return bb;
}

std::vector<BouncingBallData> detect_bouncing_balls(const BoundaryGeometry& geom, const BouncingBallOptions& options) {
  const RadialFunction& r = geom.radial();
  auto dr = [&](double t) { return r(t, 1); };
  const int n = options.scan_samples;
  const double h = kPi / n;

  double scale = 0.0;
  double slope = 0.0;
  for (int i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(r(i * h)));
    slope = std::max(slope, std::abs(dr(i * h)));
  }

  std::vector<double> roots;
  if (slope <= 1e-13 * scale) {
    BouncingBallData bb = bouncing_ball_at(geom, 0.0, options.jet_order);
    bb.degenerate_family = true;
    try {
      bb.stability = poincare_map(geom, bb);
    } catch (const Error&) {
    }
    return {bb};
  }

  double prev = dr(0.0);
  if (prev == 0.0) roots.push_back(0.0);
  for (int i = 1; i <= n; ++i) {
    const double t = i * h;
    const double val = dr(t);
    if (val == 0.0) {
      roots.push_back(t);
    } else if (prev != 0.0 && (prev < 0.0) != (val < 0.0)) {
      std::uintmax_t max_iter = 200;
      const auto bracket = boost::math::tools::toms748_solve(dr, t - h, t, prev, val,
                                                             boost::math::tools::eps_tolerance<double>(52), max_iter);
      roots.push_back(0.5 * (bracket.first + bracket.second));
    }
    prev = val;
  }
  for (double& t : roots) {
    t = wrap_positive(t, kPi);
    if (kPi - t < 1e-12) t = 0.0;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double x, double y) { return std::abs(x - y) < 1e-9; }),
              roots.end());
  if (roots.empty()) throw Error(ErrorCode::NoneFound, "no critical point of r(theta) found");

  std::vector<BouncingBallData> out;
  for (double t : roots) {
    BouncingBallData bb = bouncing_ball_at(geom, t, options.jet_order);
    try {
      bb.stability = poincare_map(geom, bb);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateOrbit) throw;
    }
    out.push_back(std::move(bb));
  }
  return out;
}

StabilityData poincare_map(const BoundaryGeometry& geom, const BouncingBallData& bb, const PoincareOptions& options) {
  const double P = geom.perimeter();
  const double s0 = wrap_positive(geom.arclength_of_angle(bb.theta), P);
  const double phi0 = 0.5 * kPi;

  auto two_bounce = [&](double s, double phi) {
    return billiard_map(geom, billiard_map(geom, {s, phi}));
  };
  auto central = [&](double hs, double hphi) {
    Eigen::Matrix2d d;
    const PhasePoint sp = two_bounce(s0 + hs, phi0);
    const PhasePoint sm = two_bounce(s0 - hs, phi0);
    const PhasePoint pp = two_bounce(s0, phi0 + hphi);
    const PhasePoint pm = two_bounce(s0, phi0 - hphi);
    d(0, 0) = wrap_centered(sp.s - sm.s, P) / (2.0 * hs);
    d(1, 0) = (sp.phi - sm.phi) / (2.0 * hs);
    d(0, 1) = wrap_centered(pp.s - pm.s, P) / (2.0 * hphi);
    d(1, 1) = (pp.phi - pm.phi) / (2.0 * hphi);
    return d;
  };

  const double hs = options.relative_step * P;
  const double hphi = options.relative_step * kPi;
  // Richardson table on the halving sequence h, h/2, ...
  std::vector<Eigen::Matrix2d> row;
  for (int level = 0; level <= options.richardson_levels; ++level) {
    const double shrink = std::ldexp(1.0, -level);
    std::vector<Eigen::Matrix2d> next{central(shrink * hs, shrink * hphi)};
    double factor = 4.0;
    for (const auto& prev : row) {
      next.push_back((factor * next.back() - prev) / (factor - 1.0));
      factor *= 4.0;
    }
    row = std::move(next);
  }

  StabilityData out;
  out.matrix = row.back();
  out.trace = out.matrix.trace();
  out.det = out.matrix.determinant();
  out.L = bb.L;
  const double c = 1.0 + bb.L * bb.plus[2];
  out.a = -2.0 * c;
  out.jet_trace = 2.0 * (2.0 * c * c - 1.0);

  const double t = out.trace;
  if (std::abs(2.0 - std::abs(t)) < options.degeneracy_tolerance) {
    std::ostringstream msg;
    msg << "|trace| = " << std::abs(t) << " is 2 within tolerance";
    throw Error(ErrorCode::DegenerateOrbit, msg.str());
  }
  if (std::abs(t) < 2.0) {
    out.kind = StabilityKind::Elliptic;
    out.alpha = std::acos(0.5 * t);
  } else {
    out.kind = StabilityKind::Hyperbolic;
    out.alpha = std::acosh(0.5 * std::abs(t));
  }
  return out;
}

std::pair<double, double> curvature_branches(double alpha, StabilityKind kind, double L) {
  const double c = kind == StabilityKind::Hyperbolic ? std::cosh(0.5 * alpha) : std::cos(0.5 * alpha);
  return {(-1.0 + c) / L, (-1.0 - c) / L};
}

DomainConditionReport check_domain_conditions(const BoundaryGeometry& geom, const BouncingBallData& bb, int q_max,
                                              const DomainConditionOptions& options) {
  DomainConditionReport report;
  report.orbit = bb;
  auto& [nondegenerate, bad_set, third, simple] = report.conditions;
  nondegenerate.name = "nondegenerate";
  bad_set.name = "bad_set";
  third.name = "third_derivative";
  simple.name = "simple_lengths";

  std::optional<StabilityData> stability;
  nondegenerate.evaluated = true;
  try {
    stability = poincare_map(geom, bb);
    nondegenerate.passed = true;
    nondegenerate.margin = std::abs(2.0 - std::abs(stability->trace));
    nondegenerate.detail = std::string(to_string(stability->kind)) + ", trace " + std::to_string(stability->trace);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateOrbit) throw;
    nondegenerate.passed = false;
    nondegenerate.detail = e.what();
  }
  report.orbit.stability = stability;

  if (stability) {
    bad_set.evaluated = true;
    if (stability->kind == StabilityKind::Elliptic) {
      const double c = std::cos(0.5 * stability->alpha);
      bad_set.margin = std::min({std::abs(c), std::abs(c - 0.5), std::abs(c - 1.0)});
      bad_set.passed = bad_set.margin > options.bad_set_tolerance;
      bad_set.detail = "cos(alpha/2) = " + std::to_string(c);
    } else {
      bad_set.passed = true;
      bad_set.margin = stability->alpha;
      bad_set.detail = "hyperbolic";
    }
  } else {
    bad_set.detail = "not evaluated: orbit degenerate";
  }

  third.evaluated = bb.plus.order() >= 3;
  if (third.evaluated) {
    third.margin = std::abs(bb.plus[3]);
    third.passed = third.margin > options.third_derivative_tolerance;
    third.detail = "f'''(0) = " + std::to_string(bb.plus[3]);
  }

  simple.evaluated = true;
  report.condition4 = check_condition4(geom, bb.L, q_max, options.spectrum_tolerance, options.search);
  simple.passed = report.condition4->passed;
  simple.margin = std::abs(4.0 * bb.L - geom.perimeter());
  for (const auto& v : report.condition4->violations) simple.detail += (simple.detail.empty() ? "" : "; ") + v;

  report.passed = std::all_of(report.conditions.begin(), report.conditions.end(),
                              [](const ConditionResult& c) { return c.evaluated && c.passed; });
  return report;
}

}  // namespace bst
