#include "bst/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/tools/toms748_solve.hpp>

#include "bst/billiard.hpp"
#include "bst/chebyshev.hpp"
#include "bst/error.hpp"

namespace bst {

namespace {

constexpr double kPi = std::numbers::pi;

void require_iterate(int r) {
  if (r < 1) throw Error(ErrorCode::InvalidInput, "iterate r must be at least 1");
}

Eigen::MatrixXd inverse_table(double a, double L, int r, Branch branch, double guard);

}  // namespace

std::string_view to_string(Branch branch) { return branch == Branch::Plus ? "plus" : "minus"; }

Eigen::MatrixXd hessian_direct(const GraphJet& plus, const GraphJet& minus, double L, int r) {
  require_iterate(r);
  if (plus.order() < 2 || minus.order() < 2) throw Error(ErrorCode::InsufficientJet, "jets must reach order 2");
  if (std::abs(plus[0] - minus[0] - L) > 1e-9 * std::max(1.0, std::abs(L)))
    throw Error(ErrorCode::InvalidInput, "jets are not at vertex separation L");
  const int n = 2 * r;
  auto vertex = [&](int j) {
    const GraphJet& f = j % 2 == 0 ? plus : minus;
    return std::array<Vec2, 3>{Vec2(0.0, f[0]), Vec2(1.0, f[1]), Vec2(0.0, f[2])};
  };
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    const auto a = vertex(j);
    const auto b = vertex(k);
    const ChordDerivatives c = chord_derivatives(a[0], a[1], a[2], b[0], b[1], b[2]);
    H(j, j) += c.d_aa;
    H(k, k) += c.d_bb;
    H(j, k) += c.d_ab;
    H(k, j) += c.d_ab;
  }
  return H;
}

Eigen::MatrixXd hessian_direct(double a, double L, int r) {
  const double f2 = -(1.0 + 0.5 * a) / L;
  GraphJet plus{Side::Plus, {0.5 * L, 0.0, f2}};
  GraphJet minus{Side::Minus, {-0.5 * L, 0.0, -f2}};
  return hessian_direct(plus, minus, L, r);
}

Eigen::MatrixXd inverse_entries(double a, double L, int r, Branch branch) {
  return inverse_table(a, L, r, branch, 1e-12);
}

namespace {

Eigen::MatrixXd inverse_table(double a, double L, int r, Branch branch, double guard) {
  require_iterate(r);
  const double x = -0.5 * a;
  const double denom = 2.0 * chebyshev_t_minus_one(2 * r, x);
  if (!(std::abs(denom) > guard)) throw Error(ErrorCode::DegenerateDenominator, "T_2r(-a/2) = 1");
  const int n = 2 * r;
  Eigen::MatrixXd h(n, n);
  for (int p = 1; p <= n; ++p) {
    for (int q = p; q <= n; ++q) {
      const double value = L * (chebyshev_u(2 * r - q + p - 1, x) + chebyshev_u(q - p - 1, x)) / denom;
      h(p - 1, q - 1) = value;
      h(q - 1, p - 1) = value;
    }
  }
  if (branch == Branch::Minus) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if ((p + q) % 2 == 0) h(p, q) = -h(p, q);
  }
  return h;
}

double G_of_table(const Eigen::MatrixXd& h) {
  const double h11 = h(0, 0);
  if (std::abs(h11) < 1e-300) throw Error(ErrorCode::DegenerateDenominator, "h^11 = 0");
  return h.row(0).array().cube().sum() / (h11 * h11);
}

}  // namespace

Eigen::MatrixXd inverse_entries_angle(double alpha, StabilityKind kind, double L, int r) {
  require_iterate(r);
  const int n = 2 * r;
  const bool hyperbolic = kind == StabilityKind::Hyperbolic;
  const double half = 0.5 * alpha;
  const double s_half = hyperbolic ? std::sinh(half) : std::sin(half);
  const double s_r = hyperbolic ? std::sinh(r * half) : std::sin(r * half);
  if (std::abs(s_half * s_r) < 1e-12) throw Error(ErrorCode::DegenerateDenominator, "sin(r alpha/2) = 0");
  Eigen::MatrixXd h(n, n);
  for (int p = 1; p <= n; ++p) {
    for (int q = p; q <= n; ++q) {
      const double arg = (r - q + p) * half;
      const double value = hyperbolic ? L * std::cosh(arg) / (2.0 * s_half * s_r)
                                      : -L * std::cos(arg) / (2.0 * s_half * s_r);
      h(p - 1, q - 1) = value;
      h(q - 1, p - 1) = value;
    }
  }
  return h;
}

std::vector<double> normalized_eigenvalues(double a, int r) {
  require_iterate(r);
  std::vector<double> out(2 * r);
  for (int k = 0; k < 2 * r; ++k) out[k] = a + 2.0 * std::cos(k * kPi / r);
  return out;
}

double row_sum(double a, double L, int r) {
  if (std::abs(a + 2.0) < 1e-14) throw Error(ErrorCode::DegenerateDenominator, "a = -2");
  const Eigen::MatrixXd h = inverse_entries(a, L, r);
  return h.row(0).sum();
}

double G_function(double a, double L, int r, Branch branch) {
  return G_of_table(inverse_entries(a, L, r, branch));
}

MaslovData signature_and_maslov(const std::vector<double>& eigenvalues, int r) {
  require_iterate(r);
  double largest = 0.0;
  for (double v : eigenvalues) largest = std::max(largest, std::abs(v));
  MaslovData out;
  for (double v : eigenvalues) {
    if (std::abs(v) <= 1e-10 * largest) throw Error(ErrorCode::ZeroEigenvalue, "Hessian has a zero eigenvalue");
    (v > 0.0 ? out.n_plus : out.n_minus) += 1;
  }
  out.signature = out.n_plus - out.n_minus;
  auto mod8 = [](int v) { return ((v % 8) + 8) % 8; };
  auto phase = [](int m) {
    // e^{iπm/4} on the exact eighth roots of unity
    static const double h = std::sqrt(0.5);
    static const std::complex<double> roots[8] = {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
    return roots[m];
  };
  out.m = mod8(6 * r + out.signature);
  out.factor = phase(out.m);
  out.m_alt = mod8(2 * out.n_plus);
  out.factor_alt = phase(out.m_alt);
  out.conventions_disagree = out.m != out.m_alt;
  return out;
}

double HessianData::first_row_sum() const { return h_inv.row(0).sum(); }

double HessianData::first_row_cubes() const { return h_inv.row(0).array().cube().sum(); }

HessianData hessian_data(double a, double L, int r) {
  HessianData out;
  out.r = r;
  out.a = a;
  out.L = L;
  out.H = hessian_direct(a, L, r);
  out.h_inv = inverse_entries(a, L, r);
  out.eigenvalues = normalized_eigenvalues(a, r);
  out.maslov = signature_and_maslov(out.eigenvalues, r);
  out.G_value = out.first_row_cubes() / (out.h11() * out.h11());
  return out;
}

double cleared_G_difference(double a, double L) {
  const double x = -0.5 * a;
  const double u3 = chebyshev_u(3, x);
  const double d2 = 2.0 * chebyshev_t_minus_one(4, x) * u3 * u3;
  const double g1 = G_of_table(inverse_table(a, L, 1, Branch::Plus, 0.0));
  const double g2 = G_of_table(inverse_table(a, L, 2, Branch::Plus, 0.0));
  return (g1 - g2) * d2 / L;
}

BadSetReport bad_set_polynomial_check(unsigned seed) {
  BadSetReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  report.identity_points = 20;
  for (int i = 0; i < report.identity_points; ++i) {
    const double a = dist(rng);
    const double a2 = a * a;
    const double a3 = a2 * a;
    const double lhs = (a3 - 2.0 * a) * (a3 - 2.0 * a) * (a3 - 8.0) -
                       (std::pow(a, 9) - 6.0 * std::pow(a, 7) - 2.0 * std::pow(a, 6) + 12.0 * std::pow(a, 5));
    const double rhs = 2.0 * a2 * (a + 1.0) * std::pow(a - 2.0, 3) * (a + 2.0);
    report.identity_max_residual =
        std::max(report.identity_max_residual, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }

  // Simple roots show up as sign changes of Ψ, the double root at 0 as a
  // sign change of Ψ′ where Ψ itself vanishes.
  auto psi = [](double a) { return cleared_G_difference(a); };
  constexpr double kStep = 1e-6;
  auto dpsi = [&](double a) { return (psi(a + kStep) - psi(a - kStep)) / (2.0 * kStep); };
  const int n = 4000;
  const double lo = -2.0 + 1e-3;
  const double hi = 2.0 - 1e-3;
  const double h = (hi - lo) / (n + 0.5);
  std::vector<double> grid(n + 1);
  std::vector<double> values(n + 1);
  std::vector<double> slopes(n + 1);
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    grid[i] = lo + (i + 0.25) * h;
    values[i] = psi(grid[i]);
    slopes[i] = dpsi(grid[i]);
    scale = std::max(scale, std::abs(values[i]));
  }
  auto solve = [](auto&& f, double x0, double x1, double f0, double f1) {
    std::uintmax_t max_iter = 200;
    const auto r = boost::math::tools::toms748_solve(f, x0, x1, f0, f1, boost::math::tools::eps_tolerance<double>(50),
                                                     max_iter);
    return 0.5 * (r.first + r.second);
  };
  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    if ((values[i] < 0.0) != (values[i + 1] < 0.0)) roots.push_back(solve(psi, grid[i], grid[i + 1], values[i], values[i + 1]));
    if ((slopes[i] < 0.0) != (slopes[i + 1] < 0.0)) {
      const double x = solve(dpsi, grid[i], grid[i + 1], slopes[i], slopes[i + 1]);
      if (std::max(std::abs(psi(x - kStep)), std::abs(psi(x + kStep))) <= 1e-10 * scale) roots.push_back(x);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double x, double y) { return std::abs(x - y) < 1e-6; }),
              roots.end());
  report.numeric_roots = roots;

  const std::vector<double> expected{-1.0, 0.0};
  if (roots.size() == expected.size()) {
    for (std::size_t i = 0; i < roots.size(); ++i)
      report.root_error = std::max(report.root_error, std::abs(roots[i] - expected[i]));
  } else {
    report.root_error = std::numeric_limits<double>::infinity();
  }
  report.passed = report.identity_max_residual <= 1e-10 && report.root_error <= 1e-8;
  return report;
}

}  // namespace bst
