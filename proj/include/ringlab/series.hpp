#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ringlab {

using cplx = std::complex<double>;

inline constexpr double kSeriesTolerance = 1e-10;

/// Formal power series c_0 + c_1 z + ... + c_K z^K, known exactly up to z^K.
///
/// Binary operations truncate to the smaller of the two orders. All
/// coefficients are finite; constructors reject NaN/Inf with
/// ErrorKind::NonFinite.
class TruncatedSeries {
 public:
  /// The zero series of order 0.
  TruncatedSeries();
  /// The zero series of the given order.
  explicit TruncatedSeries(std::size_t order);
  explicit TruncatedSeries(std::vector<cplx> coeffs);
  TruncatedSeries(std::initializer_list<cplx> coeffs);

  static TruncatedSeries constant(cplx value, std::size_t order);
  /// The series z.
  static TruncatedSeries identity(std::size_t order);
  static TruncatedSeries from_real(std::span<const double> coeffs);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::vector<double> real_coeffs() const;

  const cplx& operator[](std::size_t k) const { return coeffs_.at(k); }
  /// Coefficient of z^k, zero beyond the stored order.
  cplx coeff(std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : cplx{}; }
  void set(std::size_t k, cplx value);

  TruncatedSeries truncated(std::size_t order) const;
  /// Horner evaluation of the stored polynomial.
  cplx evaluate(cplx z) const noexcept;

  double max_abs_diff(const TruncatedSeries& other) const;
  bool approx_equal(const TruncatedSeries& other, double tol = kSeriesTolerance) const;

  TruncatedSeries& operator+=(const TruncatedSeries& rhs);
  TruncatedSeries& operator-=(const TruncatedSeries& rhs);
  TruncatedSeries& operator*=(const TruncatedSeries& rhs);
  TruncatedSeries& operator*=(cplx scalar);

 private:
  std::vector<cplx> coeffs_;
};

TruncatedSeries operator+(TruncatedSeries lhs, const TruncatedSeries& rhs);
TruncatedSeries operator-(TruncatedSeries lhs, const TruncatedSeries& rhs);
TruncatedSeries operator*(const TruncatedSeries& lhs, const TruncatedSeries& rhs);
TruncatedSeries operator*(TruncatedSeries lhs, cplx scalar);
TruncatedSeries operator*(cplx scalar, TruncatedSeries rhs);
TruncatedSeries operator-(TruncatedSeries f);

/// 1/f. Throws ZeroConstantTerm when |f_0| <= tol.
TruncatedSeries reciprocal(const TruncatedSeries& f, double tol = kSeriesTolerance);

/// f(g(z)); requires g(0) = 0, else NonzeroInnerConstant.
TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g,
                        double tol = kSeriesTolerance);

/// The series h with f(h(z)) = h(f(z)) = z, by Newton iteration with order
/// doubling. Requires f(0) = 0 (NonzeroInnerConstant) and |f_1| > tol
/// (NonInvertible).
TruncatedSeries compositional_inverse(const TruncatedSeries& f, double tol = kSeriesTolerance);

/// f'(z); the order drops by one (an order-0 series maps to the zero series).
TruncatedSeries derivative(const TruncatedSeries& f);

/// z f(z), one order higher.
TruncatedSeries multiply_by_z(const TruncatedSeries& f);
/// f(z)/z, one order lower; requires f(0) = 0.
TruncatedSeries divide_by_z(const TruncatedSeries& f, double tol = kSeriesTolerance);
/// f(c z).
TruncatedSeries rescale_argument(const TruncatedSeries& f, cplx c);
TruncatedSeries power(const TruncatedSeries& f, unsigned n);

}  // namespace ringlab
