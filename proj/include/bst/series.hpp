#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bst {

/// Truncated Taylor series c_0 + c_1 t + ... + c_K t^K.
///
/// Arithmetic is exact up to the truncation order: every product drops terms
/// above K, so the first K coefficients never depend on how far a computation
/// was carried beyond them.
class Series {
 public:
  explicit Series(std::size_t order) : coeffs_(order + 1, 0.0) {}
  Series(std::size_t order, std::span<const double> coeffs);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  double operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
  double& operator[](std::size_t k) { return coeffs_[k]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  Series& operator+=(const Series& other);
  Series& operator-=(const Series& other);
  Series& operator*=(double scale);

  friend Series operator+(Series lhs, const Series& rhs) { return lhs += rhs; }
  friend Series operator-(Series lhs, const Series& rhs) { return lhs -= rhs; }
  friend Series operator*(Series lhs, double s) { return lhs *= s; }
  friend Series operator*(double s, Series rhs) { return rhs *= s; }
  friend Series operator*(const Series& lhs, const Series& rhs);

  /// Evaluates at t (Horner).
  double operator()(double t) const;

  /// k-th derivative at 0, i.e. k! c_k.
  double derivative(std::size_t k) const;

 private:
  std::vector<double> coeffs_;
};

/// outer(inner(t)); inner must have zero constant term.
Series compose(const Series& outer, const Series& inner);

/// Compositional inverse: returns s with x(s(t)) = t. Requires x_0 = 0 and
/// x_1 != 0 (the caller checks the latter).
Series revert(const Series& x);

}  // namespace bst
