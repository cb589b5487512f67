#include "ringlab/series.hpp"

#include <algorithm>
#include <cmath>

#include "ringlab/error.hpp"

namespace ringlab {
namespace {

bool finite(cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

void require_finite(const std::vector<cplx>& coeffs) {
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (!finite(coeffs[k])) {
      throw Error(ErrorKind::NonFinite, "series coefficient " + std::to_string(k) + " is not finite");
    }
  }
}

}  // namespace

TruncatedSeries::TruncatedSeries() : coeffs_(1) {}

TruncatedSeries::TruncatedSeries(std::size_t order) : coeffs_(order + 1) {}

TruncatedSeries::TruncatedSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidArgument, "series needs at least one coefficient");
  require_finite(coeffs_);
}

TruncatedSeries::TruncatedSeries(std::initializer_list<cplx> coeffs)
    : TruncatedSeries(std::vector<cplx>(coeffs)) {}

TruncatedSeries TruncatedSeries::constant(cplx value, std::size_t order) {
  TruncatedSeries s(order);
  s.set(0, value);
  return s;
}

TruncatedSeries TruncatedSeries::identity(std::size_t order) {
  TruncatedSeries s(order);
  if (order >= 1) s.coeffs_[1] = 1.0;
  return s;
}

TruncatedSeries TruncatedSeries::from_real(std::span<const double> coeffs) {
  return TruncatedSeries(std::vector<cplx>(coeffs.begin(), coeffs.end()));
}

std::vector<double> TruncatedSeries::real_coeffs() const {
  std::vector<double> out(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), out.begin(), [](cplx c) { return c.real(); });
  return out;
}

void TruncatedSeries::set(std::size_t k, cplx value) {
  if (!finite(value)) throw Error(ErrorKind::NonFinite, "series coefficient is not finite");
  coeffs_.at(k) = value;
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
  TruncatedSeries s(order);
  std::copy_n(coeffs_.begin(), std::min(order + 1, coeffs_.size()), s.coeffs_.begin());
  return s;
}

cplx TruncatedSeries::evaluate(cplx z) const noexcept {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double TruncatedSeries::max_abs_diff(const TruncatedSeries& other) const {
  const std::size_t n = std::min(order(), other.order()) + 1;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(coeffs_[k] - other.coeffs_[k]));
  return worst;
}

bool TruncatedSeries::approx_equal(const TruncatedSeries& other, double tol) const {
  return max_abs_diff(other) <= tol;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs) {
  coeffs_.resize(std::min(coeffs_.size(), rhs.coeffs_.size()));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs) {
  coeffs_.resize(std::min(coeffs_.size(), rhs.coeffs_.size()));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const TruncatedSeries& rhs) {
  *this = *this * rhs;
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx scalar) {
  if (!finite(scalar)) throw Error(ErrorKind::NonFinite, "scalar factor is not finite");
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

TruncatedSeries operator+(TruncatedSeries lhs, const TruncatedSeries& rhs) { return lhs += rhs; }
TruncatedSeries operator-(TruncatedSeries lhs, const TruncatedSeries& rhs) { return lhs -= rhs; }

TruncatedSeries operator*(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
  const std::size_t order = std::min(lhs.order(), rhs.order());
  std::vector<cplx> out(order + 1);
  const auto a = lhs.coeffs();
  const auto b = rhs.coeffs();
  for (std::size_t i = 0; i <= order; ++i) {
    if (a[i] == cplx{}) continue;
    for (std::size_t j = 0; i + j <= order; ++j) out[i + j] += a[i] * b[j];
  }
  return TruncatedSeries(std::move(out));
}

TruncatedSeries operator*(TruncatedSeries lhs, cplx scalar) { return lhs *= scalar; }
TruncatedSeries operator*(cplx scalar, TruncatedSeries rhs) { return rhs *= scalar; }
TruncatedSeries operator-(TruncatedSeries f) { return f *= -1.0; }

TruncatedSeries reciprocal(const TruncatedSeries& f, double tol) {
  const auto c = f.coeffs();
  if (std::abs(c[0]) <= tol) throw Error(ErrorKind::ZeroConstantTerm, "reciprocal needs f(0) != 0");
  const std::size_t order = f.order();
  std::vector<cplx> r(order + 1);
  r[0] = 1.0 / c[0];
  for (std::size_t n = 1; n <= order; ++n) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += c[k] * r[n - k];
    r[n] = -acc * r[0];
  }
  return TruncatedSeries(std::move(r));
}

TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g, double tol) {
  if (std::abs(g[0]) > tol) {
    throw Error(ErrorKind::NonzeroInnerConstant, "composition needs g(0) = 0");
  }
  const std::size_t order = std::min(f.order(), g.order());
  TruncatedSeries inner = g.truncated(order);
  inner.set(0, 0.0);
  // Horner in the series ring.
  TruncatedSeries acc = TruncatedSeries::constant(f[order], order);
  for (std::size_t k = order; k-- > 0;) {
    acc = acc * inner;
    acc.set(0, acc[0] + f[k]);
  }
  return acc;
}

TruncatedSeries compositional_inverse(const TruncatedSeries& f, double tol) {
  if (std::abs(f[0]) > tol) {
    throw Error(ErrorKind::NonzeroInnerConstant, "inversion needs f(0) = 0");
  }
  const std::size_t order = f.order();
  if (order == 0) return TruncatedSeries(std::size_t{0});
  if (std::abs(f[1]) <= tol) throw Error(ErrorKind::NonInvertible, "inversion needs f'(0) != 0");

  const TruncatedSeries df = derivative(f);
  TruncatedSeries h(order);
  h.set(1, 1.0 / f[1]);
  // h is exact through z^known; each Newton step doubles that.
  std::size_t known = 1;
  while (known < order) {
    const std::size_t next = std::min(2 * known + 1, order);
    const TruncatedSeries hn = h.truncated(next);
    TruncatedSeries residual = compose(f.truncated(next), hn, tol) - TruncatedSeries::identity(next);
    const TruncatedSeries slope = compose(df.truncated(next), hn, tol);
    const TruncatedSeries step = residual * reciprocal(slope, tol);
    const TruncatedSeries updated = hn - step;
    for (std::size_t k = 0; k <= next; ++k) h.set(k, updated[k]);
    known = next;
  }
  h.set(0, 0.0);
  return h;
}

TruncatedSeries derivative(const TruncatedSeries& f) {
  if (f.order() == 0) return TruncatedSeries(std::size_t{0});
  std::vector<cplx> out(f.order());
  for (std::size_t k = 1; k <= f.order(); ++k) out[k - 1] = static_cast<double>(k) * f[k];
  return TruncatedSeries(std::move(out));
}

TruncatedSeries multiply_by_z(const TruncatedSeries& f) {
  std::vector<cplx> out(f.order() + 2);
  std::copy(f.coeffs().begin(), f.coeffs().end(), out.begin() + 1);
  return TruncatedSeries(std::move(out));
}

TruncatedSeries divide_by_z(const TruncatedSeries& f, double tol) {
  if (std::abs(f[0]) > tol) throw Error(ErrorKind::NonzeroInnerConstant, "division by z needs f(0) = 0");
  if (f.order() == 0) return TruncatedSeries(std::size_t{0});
  return TruncatedSeries(std::vector<cplx>(f.coeffs().begin() + 1, f.coeffs().end()));
}

TruncatedSeries rescale_argument(const TruncatedSeries& f, cplx c) {
  std::vector<cplx> out(f.coeffs().begin(), f.coeffs().end());
  cplx factor = 1.0;
  for (auto& x : out) {
    x *= factor;
    factor *= c;
  }
  return TruncatedSeries(std::move(out));
}

TruncatedSeries power(const TruncatedSeries& f, unsigned n) {
  TruncatedSeries result = TruncatedSeries::constant(1.0, f.order());
  TruncatedSeries base = f;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace ringlab
