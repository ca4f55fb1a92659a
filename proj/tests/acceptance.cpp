// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bst/billiard.hpp"
#include "bst/bouncing_ball.hpp"
#include "bst/chebyshev.hpp"
#include "bst/error.hpp"
#include "bst/hessian.hpp"
#include "bst/reconstruction.hpp"

using namespace bst;
using std::numbers::pi;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// 50 values of a in (-4, 4) away from a = ±2 and from the singular set of
// every inverse with r <= 6.
std::vector<double> admissible_a() {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  std::vector<double> out;
  while (out.size() < 50) {
    const double a = dist(rng);
    if (std::abs(std::abs(a) - 2.0) < 0.05) continue;
    bool ok = true;
    for (int r = 1; r <= 6 && ok; ++r) ok = std::abs(chebyshev_t_minus_one(2 * r, -0.5 * a)) > 1e-3;
    if (ok) out.push_back(a);
  }
  return out;
}

Verdict inverse_hessian() {
  const auto grid = admissible_a();
  double worst = 0.0;
  for (int r = 1; r <= 6; ++r)
    for (double a : grid)
      for (Branch b : {Branch::Plus, Branch::Minus}) {
        const double L = 1.5;
        const Eigen::MatrixXd H = hessian_direct(b == Branch::Plus ? a : -a, L, r);
        const Eigen::MatrixXd inv = inverse_entries(a, L, r, b);
        const Eigen::MatrixXd residual = H * inv - Eigen::MatrixXd::Identity(2 * r, 2 * r);
        worst = std::max(worst, residual.cwiseAbs().maxCoeff());
      }
  return {worst <= 1e-9, fmt("max |H h - I| = %.2e over r<=6, 50 a, both branches (tol 1e-9)", worst)};
}

Verdict eigenvalues() {
  double worst = 0.0;
  for (int r = 1; r <= 6; ++r)
    for (double a : admissible_a()) {
      const double L = 0.7;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(-L * hessian_direct(a, L, r));
      auto expected = normalized_eigenvalues(a, r);
      std::sort(expected.begin(), expected.end());
      for (int k = 0; k < 2 * r; ++k) worst = std::max(worst, std::abs(solver.eigenvalues()[k] - expected[k]));
    }
  return {worst <= 1e-9, fmt("max eigenvalue deviation %.2e (tol 1e-9)", worst)};
}

Verdict row_sums() {
  double worst = 0.0;
  for (int r = 1; r <= 6; ++r)
    for (double a : admissible_a()) {
      const double L = 1.5;
      const Eigen::MatrixXd inv = inverse_entries(a, L, r);
      worst = std::max(worst, std::abs(inv.row(0).sum() + L / (a + 2.0)));
    }
  return {worst <= 1e-10, fmt("max |sum_q h^1q + L/(a+2)| = %.2e (tol 1e-10)", worst)};
}

Verdict bad_set() {
  const BadSetReport report = bad_set_polynomial_check(2026);
  std::string roots;
  for (double x : report.numeric_roots) roots += fmt("%.3g ", x);
  const bool ok = report.identity_points >= 20 && report.identity_max_residual <= 1e-10 && report.passed;
  return {ok, fmt("identity residual %.2e at %g points; ", report.identity_max_residual, report.identity_points) +
                  "roots { " + roots + "}" + fmt(" error %.2e (tol 1e-8)", report.root_error)};
}

Verdict poincare() {
  const auto geom = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const auto orbits = detect_bouncing_balls(geom);
  double trace_err = 1.0, cosh_err = 1.0;
  for (const auto& bb : orbits) {
    const StabilityData s = poincare_map(geom, bb);
    if (std::abs(bb.L - 2.0) < 1e-9) trace_err = std::abs(s.trace + 1.0);
    if (std::abs(bb.L - 4.0) < 1e-9 && s.kind == StabilityKind::Hyperbolic)
      cosh_err = std::abs(std::cosh(0.5 * s.alpha) - 7.0);
  }
  return {orbits.size() == 2 && trace_err <= 1e-6 && cosh_err <= 1e-6,
          fmt("minor axis |trace + 1| = %.2e, major axis |cosh(alpha/2) - 7| = %.2e (tol 1e-6)", trace_err, cosh_err)};
}

int signature_of(double f2, double L, int r) {
  const double a = -2.0 * (1.0 + L * f2);
  return signature_and_maslov(normalized_eigenvalues(a, r), r).signature;
}

Verdict duality() {
  const auto [ep, em] = curvature_branches(2.0 * pi / 3.0, StabilityKind::Elliptic, 2.0);
  const int s_plus = signature_of(ep, 2.0, 2), s_minus = signature_of(em, 2.0, 2);
  const auto [hp, hm] = curvature_branches(2.0 * std::acosh(7.0), StabilityKind::Hyperbolic, 4.0);
  const int h_plus = signature_of(hp, 4.0, 1), h_minus = signature_of(hm, 4.0, 1);
  const bool ok = std::abs(ep + 0.25) < 1e-14 && std::abs(em + 0.75) < 1e-14 && s_plus == -2 && s_minus == 2 &&
                  h_plus == -2 && h_minus == 2;
  char buf[200];
  std::snprintf(buf, sizeof buf, "elliptic f''=(%.4g, %.4g) r=2 signatures (%d, %d); hyperbolic r=1 signatures (%d, %d)",
                ep, em, s_plus, s_minus, h_plus, h_minus);
  return {ok, buf};
}

Verdict round_trip() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> a_dist(-3.0, 3.0), L_dist(0.5, 1.5), c_dist(0.5, 2.0), unit(-1.0, 1.0);
  const int J = 6;
  double err_plain = 0.0, err_remainder = 0.0, err_remainder_elliptic = 0.0, worst_a = 0.0;
  int done = 0;
  while (done < 100) {
    const double a = a_dist(rng);
    if (std::abs(a) < 0.05 || std::abs(std::abs(a) - 1.0) < 0.05 || std::abs(std::abs(a) - 2.0) < 0.05) continue;
    const double L = L_dist(rng);
    std::vector<double> jet(2 * J + 1);
    jet[0] = 0.5 * L;
    jet[2] = -(1.0 + 0.5 * a) / L;
    jet[3] = 0.1 + 0.9 * std::abs(unit(rng));
    for (int k = 4; k <= 2 * J; ++k) jet[k] = unit(rng);
    InvariantConstants consts;
    for (int j = 2; j <= J; ++j) {
      consts.C_tilde[j] = c_dist(rng);
      consts.C[j] = c_dist(rng);
      consts.C_hat[j] = c_dist(rng);
    }
    consts.A = {{1, c_dist(rng)}, {2, c_dist(rng)}};
    auto error = [&](const InvariantConstants& c) {
      const auto rec = recover_jet(synthesize_spectral_data(jet, c, J), c, J);
      double e = 0.0;
      for (int k = 2; k <= 2 * J; ++k) e = std::max(e, std::abs(rec.jets[k] - jet[k]) / std::max(1.0, std::abs(jet[k])));
      return e;
    };
    err_plain = std::max(err_plain, error(consts));
    InvariantConstants with_remainder = consts;
    with_remainder.remainder = quadratic_remainder(0.1);
    const double e = error(with_remainder);
    if (e > err_remainder) {
      err_remainder = e;
      worst_a = a;
    }
    if (std::abs(a) < 2.0) err_remainder_elliptic = std::max(err_remainder_elliptic, e);
    ++done;
  }
  return {err_plain <= 1e-8 && err_remainder <= 1e-8,
          fmt("100 jets, a in (-3,3): max rel error %.2e with zero remainder, %.2e with quadratic remainder w=0.1",
              err_plain, err_remainder) +
              fmt(" (worst at a = %.3f; %.2e over |a| < 2) (tol 1e-8)", worst_a, err_remainder_elliptic)};
}

Verdict spectra() {
  const auto circle = validate_spec(BoundarySpec::circle(1.0));
  const auto spectrum = length_spectrum(circle, 6, 1e-9);
  std::vector<double> expected;
  for (int q = 2; q <= 6; ++q)
    for (int p = 1; 2 * p <= q; ++p) expected.push_back(2.0 * q * std::sin(p * pi / q));
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end(), [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                 expected.end());
  double worst = spectrum.entries.size() == expected.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(expected.size(), spectrum.entries.size()); ++i)
    worst = std::max(worst, std::abs(spectrum.entries[i].length - expected[i]));

  const auto ellipse = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const auto report = check_condition4(ellipse, 2.0, 4);
  const bool collision = !report.passed && report.multiplicity_2L == 1 && report.multiplicity_4L == 2;
  return {worst <= 1e-8 && collision,
          fmt("circle: %g clusters, max length error %.2e (tol 1e-8); ", static_cast<double>(spectrum.entries.size()),
              worst) +
              std::string("ellipse minor axis: 4L collision ") + (collision ? "reported" : "missed")};
}

Verdict symmetry() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coeff(-0.025, 0.025), angle(0.0, 2.0 * pi);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    BoundarySpec spec;
    spec.radial_coeffs = {{0, 1.0, 0.0}};
    for (int f = 2; f <= 8; f += 2) spec.radial_coeffs.push_back({f, coeff(rng), coeff(rng)});
    const auto geom = validate_spec(spec);
    const double theta = angle(rng);
    const double rot = vertical_frame_rotation(geom, theta);
    const GraphJet plus = extract_graph_jet(geom, theta, rot, 12);
    const GraphJet minus = extract_graph_jet(geom, theta + pi, rot, 12);
    for (std::size_t k = 0; k <= 12; ++k) {
      const double expected = k % 2 == 0 ? -plus[k] : plus[k];
      worst = std::max(worst, std::abs(minus[k] - expected) / std::max(1.0, std::abs(plus[k])));
    }
  }
  return {worst <= 1e-10, fmt("20 random specs, max relative deviation %.2e (tol 1e-10)", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria = {
      {"chebyshev-inverse", inverse_hessian, 5.0}, {"eigenvalues", eigenvalues, 0.0},
      {"row-sum", row_sums, 0.0},                  {"bad-set", bad_set, 0.0},
      {"poincare", poincare, 0.0},                 {"duality", duality, 0.0},
      {"round-trip", round_trip, 30.0},            {"length-spectrum", spectra, 0.0},
      {"symmetry", symmetry, 0.0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].budget_seconds > 0.0 && seconds > criteria[i].budget_seconds) {
      v.passed = false;
      v.detail += fmt(" [over budget %.0f s]", criteria[i].budget_seconds);
    }
    failures += !v.passed;
    std::printf("%s %zu %-17s %s (%.2f s)\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail.c_str(),
                seconds);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
