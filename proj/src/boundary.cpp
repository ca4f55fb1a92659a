#include "bst/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bst/error.hpp"

namespace bst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Golden-free local refinement: repeatedly resample a shrinking window
// around the current extremum of `f`.
template <typename F>
double refine_extremum(F&& f, double center, double half_width, int rounds, bool maximize) {
  constexpr int kWindowSamples = 33;
  double best_x = center;
  double best = f(center);
  for (int round = 0; round < rounds; ++round) {
    const double lo = best_x - half_width;
    const double step = 2.0 * half_width / (kWindowSamples - 1);
    for (int i = 0; i < kWindowSamples; ++i) {
      const double x = lo + i * step;
      const double v = f(x);
      if (maximize ? v > best : v < best) {
        best = v;
        best_x = x;
      }
    }
    half_width = 2.0 * step;
  }
  return best;
}

template <typename F>
std::pair<double, double> sampled_range(F&& f, int samples, int rounds) {
  const double h = kTwoPi / samples;
  int imin = 0;
  int imax = 0;
  std::vector<double> values(samples);
  for (int i = 0; i < samples; ++i) {
    values[i] = f(i * h);
    if (values[i] < values[imin]) imin = i;
    if (values[i] > values[imax]) imax = i;
  }
  return {refine_extremum(f, imin * h, h, rounds, false), refine_extremum(f, imax * h, h, rounds, true)};
}

}  // namespace

BoundarySpec BoundarySpec::circle(double radius) {
  return BoundarySpec{"circle", {{0, radius, 0.0}}, 0.0};
}

BoundarySpec BoundarySpec::ellipse(double a, double b) {
  // r(θ) = ab / sqrt(A (1 - e cos 2θ)) with A = (a²+b²)/2, e = (a²-b²)/(a²+b²).
  // Factor 1 - e cos φ = c (1 - ζ z)(1 - ζ/z), z = e^{iφ}, and expand both
  // binomial series; every term of the coefficient sums has the same sign.
  BoundarySpec spec;
  spec.label = "ellipse";
  const double A = 0.5 * (a * a + b * b);
  const double e = (a * a - b * b) / (a * a + b * b);
  const double scale = a * b / std::sqrt(A);
  if (std::abs(e) < 1e-300) {
    spec.radial_coeffs.push_back({0, scale, 0.0});
    return spec;
  }
  const double zeta = (1.0 - std::sqrt(1.0 - e * e)) / e;
  const double c = 1.0 / (1.0 + zeta * zeta);
  const double prefactor = scale / std::sqrt(c);

  // β_n = binom(2n, n) / 4^n
  std::vector<double> beta{1.0};
  auto beta_at = [&](std::size_t n) {
    while (beta.size() <= n) {
      const double m = static_cast<double>(beta.size() - 1);
      beta.push_back(beta.back() * (2.0 * m + 1.0) / (2.0 * m + 2.0));
    }
    return beta[n];
  };

  double c0 = 0.0;
  for (int k = 0;; ++k) {
    double sum = 0.0;
    for (std::size_t n = 0;; ++n) {
      const double term = beta_at(n) * beta_at(n + k) * std::pow(zeta, 2.0 * n + k);
      sum += term;
      if (std::abs(term) < 1e-20 * std::abs(sum)) break;
    }
    const double coeff = prefactor * (k == 0 ? sum : 2.0 * sum);
    if (k == 0) c0 = coeff;
    if (k > 0 && std::abs(coeff) < 1e-40 * std::abs(c0)) break;
    spec.radial_coeffs.push_back({2 * k, coeff, 0.0});
  }
  return spec;
}

double RadialFunction::operator()(double theta, int deriv) const {
  const double shift = deriv * 0.5 * kPi;
  double acc = 0.0;
  for (const auto& mode : modes_) {
    if (mode.freq == 0) {
      if (deriv == 0) acc += mode.cos_coeff;
      continue;
    }
    const double m = mode.freq;
    const double arg = m * theta + shift;
    acc += std::pow(m, deriv) * (mode.cos_coeff * std::cos(arg) + mode.sin_coeff * std::sin(arg));
  }
  return acc;
}

Series RadialFunction::taylor(double theta, std::size_t order) const {
  Series out(order);
  double factorial = 1.0;
  for (std::size_t k = 0; k <= order; ++k) {
    if (k > 1) factorial *= static_cast<double>(k);
    out[k] = (*this)(theta, static_cast<int>(k)) / factorial;
  }
  return out;
}

Vec2 BoundaryGeometry::point(double theta) const {
  const double phi = theta + spec_.rotation;
  return radial_(theta) * Vec2(std::cos(phi), std::sin(phi));
}

Vec2 BoundaryGeometry::d1(double theta) const {
  const double phi = theta + spec_.rotation;
  const Vec2 radial_dir(std::cos(phi), std::sin(phi));
  const Vec2 normal_dir(-std::sin(phi), std::cos(phi));
  return radial_(theta, 1) * radial_dir + radial_(theta) * normal_dir;
}

Vec2 BoundaryGeometry::d2(double theta) const {
  const double phi = theta + spec_.rotation;
  const Vec2 radial_dir(std::cos(phi), std::sin(phi));
  const Vec2 normal_dir(-std::sin(phi), std::cos(phi));
  const double r = radial_(theta);
  return (radial_(theta, 2) - r) * radial_dir + 2.0 * radial_(theta, 1) * normal_dir;
}

double BoundaryGeometry::speed(double theta) const {
  return std::hypot(radial_(theta), radial_(theta, 1));
}

double BoundaryGeometry::curvature_at_angle(double theta) const {
  const double r = radial_(theta);
  const double r1 = radial_(theta, 1);
  const double r2 = radial_(theta, 2);
  const double q = r * r + r1 * r1;
  return (q + r1 * r1 - r * r2) / (q * std::sqrt(q));
}

double BoundaryGeometry::arclength_of_angle(double theta) const {
  double s = speed_mean_ * theta;
  for (std::size_t k = 1; k < speed_cos_.size(); ++k) {
    const double kk = static_cast<double>(k);
    s += (speed_cos_[k] * std::sin(kk * theta) + speed_sin_[k] * (1.0 - std::cos(kk * theta))) / kk;
  }
  return s;
}

double BoundaryGeometry::angle_of_arclength(double s) const {
  const double turns = std::floor(s / perimeter_);
  const double target = s - turns * perimeter_;
  double lo = 0.0;
  double hi = kTwoPi;
  double theta = kTwoPi * target / perimeter_;
  for (int iter = 0; iter < 60; ++iter) {
    const double residual = arclength_of_angle(theta) - target;
    if (residual > 0.0) hi = std::min(hi, theta);
    else lo = std::max(lo, theta);
    double next = theta - residual / speed(theta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::abs(next - theta);
    theta = next;
    if (change < 1e-15 * kTwoPi) break;
  }
  return theta + kTwoPi * turns;
}

double BoundaryGeometry::curvature(double s) const {
  return curvature_at_angle(angle_of_arclength(s));
}

CurvePoint BoundaryGeometry::at_arclength(double s) const {
  CurvePoint out;
  out.theta = angle_of_arclength(s);
  out.position = point(out.theta);
  const Vec2 v = d1(out.theta);
  out.tangent = v / v.norm();
  const Vec2 inward(-out.tangent.y(), out.tangent.x());
  out.accel = curvature_at_angle(out.theta) * inward;
  return out;
}

BoundaryGeometry validate_spec(const BoundarySpec& spec, const GeometryOptions& options) {
  if (spec.radial_coeffs.empty()) throw Error(ErrorCode::InvalidInput, "empty radial coefficient list");
  for (const auto& mode : spec.radial_coeffs) {
    if (mode.freq < 0) throw Error(ErrorCode::InvalidInput, "negative frequency " + std::to_string(mode.freq));
    if (!std::isfinite(mode.cos_coeff) || !std::isfinite(mode.sin_coeff))
      throw Error(ErrorCode::InvalidInput, "non-finite coefficient");
    if (mode.freq % 2 != 0 && (mode.cos_coeff != 0.0 || mode.sin_coeff != 0.0))
      throw Error(ErrorCode::OddModePresent, "frequency " + std::to_string(mode.freq) + " breaks central symmetry");
  }

  BoundaryGeometry geom(spec);
  const auto& r = geom.radial_;
  const int samples = options.curvature_samples;
  const int rounds = options.curvature_refinements;

  const auto [r_min, r_max] = sampled_range([&](double t) { return r(t); }, samples, rounds);
  const auto [speed_min, speed_max] = sampled_range([&](double t) { return geom.speed(t); }, samples, rounds);
  const double scale = std::max(std::abs(r_max), std::abs(r_min));
  if (!(speed_min > 1e-12 * scale)) throw Error(ErrorCode::NotEmbedded, "parametrization speed vanishes");
  if (!(r_min > 0.0)) throw Error(ErrorCode::NotStarShaped, "r(theta) <= 0 somewhere (min " + std::to_string(r_min) + ")");

  // Fourier series of the speed; trapezoid sums are spectrally accurate for
  // the analytic periodic integrand, so doubling N until the tail vanishes is
  // an adaptive quadrature for the perimeter.
  std::vector<double> cos_c;
  std::vector<double> sin_c;
  double mean = 0.0;
  for (int n = 128;; n *= 2) {
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = geom.speed(kTwoPi * i / n);
    const int kmax = n / 2;
    std::vector<double> cos_table(n);
    std::vector<double> sin_table(n);
    for (int i = 0; i < n; ++i) {
      cos_table[i] = std::cos(kTwoPi * i / n);
      sin_table[i] = std::sin(kTwoPi * i / n);
    }
    cos_c.assign(kmax, 0.0);
    sin_c.assign(kmax, 0.0);
    mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double tail = 0.0;
    for (int k = 1; k < kmax; ++k) {
      double ca = 0.0;
      double sa = 0.0;
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>((static_cast<long long>(k) * i) % n);
        ca += values[i] * cos_table[idx];
        sa += values[i] * sin_table[idx];
      }
      cos_c[k] = 2.0 * ca / n;
      sin_c[k] = 2.0 * sa / n;
      if (k >= kmax / 2) tail = std::max(tail, std::hypot(cos_c[k], sin_c[k]));
    }
    if (tail < 1e-15 * mean || n >= 8192) break;
  }
  std::size_t keep = cos_c.size();
  while (keep > 1 && std::hypot(cos_c[keep - 1], sin_c[keep - 1]) < 1e-17 * mean) --keep;
  cos_c.resize(keep);
  sin_c.resize(keep);
  geom.speed_mean_ = mean;
  geom.speed_cos_ = std::move(cos_c);
  geom.speed_sin_ = std::move(sin_c);
  geom.perimeter_ = kTwoPi * mean;

  const auto [k_min, k_max] = sampled_range([&](double t) { return geom.curvature_at_angle(t); }, samples, rounds);
  geom.kappa_min_ = k_min;
  geom.kappa_max_ = k_max;
  return geom;
}

double vertical_frame_rotation(const BoundaryGeometry& geom, double theta) {
  return 0.5 * kPi - (theta + geom.spec().rotation);
}

GraphJet extract_graph_jet(const BoundaryGeometry& geom, double vertex_theta, double frame_rotation,
                           std::size_t order) {
  const std::size_t n = std::max<std::size_t>(order, 1);
  const Series radius = geom.radial().taylor(vertex_theta, n);
  const double c = vertex_theta + geom.spec().rotation + frame_rotation;

  Series cos_part(n);
  Series sin_part(n);
  double factorial = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 1) factorial *= static_cast<double>(k);
    cos_part[k] = std::cos(c + 0.5 * kPi * k) / factorial;
    sin_part[k] = std::sin(c + 0.5 * kPi * k) / factorial;
  }
  Series x = radius * cos_part;
  const Series y = radius * sin_part;
  if (!(std::abs(x[1]) > 1e-10 * std::hypot(x[1], y[1])))
    throw Error(ErrorCode::NotAGraph, "tangent is vertical at the vertex");

  x[0] = 0.0;
  const Series f = compose(y, revert(x));

  GraphJet jet;
  jet.side = y[0] >= 0.0 ? Side::Plus : Side::Minus;
  jet.derivatives.resize(order + 1);
  for (std::size_t k = 0; k <= order; ++k) jet.derivatives[k] = f.derivative(k);
  return jet;
}

GraphJet extract_graph_jet(const BoundaryGeometry& geom, double vertex_theta, std::size_t order) {
  return extract_graph_jet(geom, vertex_theta, vertical_frame_rotation(geom, vertex_theta), order);
}

}  // namespace bst
