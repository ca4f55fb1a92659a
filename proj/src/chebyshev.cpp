#include "bst/chebyshev.hpp"

#include <cmath>

namespace bst {

namespace {

constexpr double kEdge = 1e-6;

double recurrence(int n, double x, double p0, double p1) {
  if (n == 0) return p0;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * p1 - p0;
    p0 = p1;
    p1 = next;
  }
  return p1;
}

}  // namespace

double chebyshev_t(int n, double x) {
  if (n < 0) n = -n;
  const double ax = std::abs(x);
  if (std::abs(ax - 1.0) < kEdge) return recurrence(n, x, 1.0, x);
  if (ax < 1.0) return std::cos(n * std::acos(x));
  const double sign = (x < 0.0 && n % 2 != 0) ? -1.0 : 1.0;
  return sign * std::cosh(n * std::acosh(ax));
}

double chebyshev_t_minus_one(int n, double x) {
  if (n < 0) n = -n;
  const double ax = std::abs(x);
  if (std::abs(ax - 1.0) < kEdge) return recurrence(n, x, 1.0, x) - 1.0;
  if (ax < 1.0) {
    const double s = std::sin(0.5 * n * std::acos(x));
    return -2.0 * s * s;
  }
  const double t = std::acosh(ax);
  if (x < 0.0 && n % 2 != 0) return -std::cosh(n * t) - 1.0;
  const double s = std::sinh(0.5 * n * t);
  return 2.0 * s * s;
}

double chebyshev_u(int n, double x) {
  if (n == -1) return 0.0;
  if (n < -1) return -chebyshev_u(-n - 2, x);
  const double ax = std::abs(x);
  if (std::abs(ax - 1.0) < kEdge) return recurrence(n, x, 1.0, 2.0 * x);
  if (ax < 1.0) {
    const double theta = std::acos(x);
    return std::sin((n + 1) * theta) / std::sin(theta);
  }
  const double sign = (x < 0.0 && n % 2 != 0) ? -1.0 : 1.0;
  const double t = std::acosh(ax);
  return sign * std::sinh((n + 1) * t) / std::sinh(t);
}

}  // namespace bst
