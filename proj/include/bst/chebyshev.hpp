#pragma once

namespace bst {

/// T_n(x). Trigonometric form on [−1, 1], hyperbolic form outside, and the
/// three-term recurrence within 1e−6 of ±1.
double chebyshev_t(int n, double x);

/// T_n(x) − 1 without cancellation near the zeros of T_n − 1.
double chebyshev_t_minus_one(int n, double x);

/// U_n(x), with U_{−1} = 0 and U_{−n} = −U_{n−2} for negative degrees.
double chebyshev_u(int n, double x);

}  // namespace bst
