#include "bst/series.hpp"

#include <algorithm>
#include <cassert>

namespace bst {

Series::Series(std::size_t order, std::span<const double> coeffs) : coeffs_(order + 1, 0.0) {
  std::copy_n(coeffs.begin(), std::min(coeffs.size(), coeffs_.size()), coeffs_.begin());
}

Series& Series::operator+=(const Series& other) {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other[k];
  return *this;
}

Series& Series::operator-=(const Series& other) {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other[k];
  return *this;
}

Series& Series::operator*=(double scale) {
  for (double& c : coeffs_) c *= scale;
  return *this;
}

Series operator*(const Series& lhs, const Series& rhs) {
  const std::size_t order = std::min(lhs.order(), rhs.order());
  Series out(order);
  for (std::size_t i = 0; i <= order; ++i) {
    if (lhs[i] == 0.0) continue;
    for (std::size_t j = 0; i + j <= order; ++j) out[i + j] += lhs[i] * rhs[j];
  }
  return out;
}

double Series::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Series::derivative(std::size_t k) const {
  double factorial = 1.0;
  for (std::size_t i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
  return factorial * (*this)[k];
}

Series compose(const Series& outer, const Series& inner) {
  assert(inner[0] == 0.0);
  const std::size_t order = std::min(outer.order(), inner.order());
  Series out(order);
  for (std::size_t k = outer.order() + 1; k-- > 0;) {
    out = out * inner;
    out[0] += outer[k];
  }
  return out;
}

Series revert(const Series& x) {
  assert(x[0] == 0.0 && x[1] != 0.0);
  const std::size_t order = x.order();
  // Nonlinear part of x.
  Series tail = x;
  tail[0] = 0.0;
  tail[1] = 0.0;

  Series identity(order);
  if (order >= 1) identity[1] = 1.0;

  // s = (t - tail(s)) / x_1; each sweep fixes one more coefficient.
  Series s = identity * (1.0 / x[1]);
  for (std::size_t sweep = 1; sweep < order; ++sweep) {
    s = (identity - compose(tail, s)) * (1.0 / x[1]);
  }
  return s;
}

}  // namespace bst
