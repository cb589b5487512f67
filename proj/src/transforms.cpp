#include "ringlab/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ringlab/error.hpp"

namespace ringlab {
namespace {

void require_kind(const TransformSeries& t, TransformKind expected, const char* op) {
  if (t.kind != expected) {
    throw Error(ErrorKind::KindMismatch, std::string(op) + " expects a " + to_string(expected) +
                                             "-transform, got " + to_string(t.kind));
  }
}

TruncatedSeries one_plus(const TruncatedSeries& f) {
  TruncatedSeries out = f;
  out.set(0, out[0] + 1.0);
  return out;
}

}  // namespace

const char* to_string(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::G: return "G";
    case TransformKind::M: return "M";
    case TransformKind::R: return "R";
    case TransformKind::B: return "B";
    case TransformKind::S: return "S";
    case TransformKind::A: return "A";
    case TransformKind::K: return "K";
  }
  return "?";
}

TransformKind transform_kind_from_string(std::string_view name) {
  if (name == "G") return TransformKind::G;
  if (name == "M" || name == "moments") return TransformKind::M;
  if (name == "R" || name == "cumulants") return TransformKind::R;
  if (name == "B") return TransformKind::B;
  if (name == "S") return TransformKind::S;
  if (name == "A") return TransformKind::A;
  if (name == "K") return TransformKind::K;
  throw Error(ErrorKind::Parse, "unknown transform kind '" + std::string(name) + "'");
}

DeterminingSequence DeterminingSequence::from_alphas(std::span<const double> alphas) {
  if (alphas.empty()) throw Error(ErrorKind::InvalidArgument, "empty determining sequence");
  return {TruncatedSeries::from_real(alphas)};
}

TruncatedSeries tilde_inverse(const TruncatedSeries& f) {
  return divide_by_z(compositional_inverse(multiply_by_z(f)));
}

TruncatedSeries solve_order_by_order(
    std::size_t order, const std::function<TruncatedSeries(const TruncatedSeries&)>& residual) {
  TruncatedSeries x(order);
  for (std::size_t n = 0; n <= order; ++n) {
    x.set(n, 0.0);
    const cplx r0 = residual(x).coeff(n);
    // Probe step on the scale of r0 so that large coefficients keep precision.
    const double step = std::max(1.0, std::abs(r0));
    x.set(n, step);
    const cplx slope = (residual(x).coeff(n) - r0) / step;
    if (std::abs(slope) < 1e-300) {
      throw Error(ErrorKind::NoConvergence,
                  "order-by-order solve has a vanishing pivot at order " + std::to_string(n));
    }
    x.set(n, -r0 / slope);
    // One refinement step absorbs the rounding in the probed slope.
    x.set(n, x[n] - residual(x).coeff(n) / slope);
  }
  return x;
}

// --- Hermitian moments and cumulants -------------------------------------

TransformSeries moment_series(const MomentData& moments) {
  return {TransformKind::M, TruncatedSeries::from_real(moments.m)};
}

TransformSeries green_series(const MomentData& moments) {
  std::vector<cplx> c(moments.m.size() + 2);
  c[1] = 1.0;
  for (std::size_t k = 0; k < moments.m.size(); ++k) c[k + 2] = moments.m[k];
  return {TransformKind::G, TruncatedSeries(std::move(c))};
}

TransformSeries r_series(const CumulantData& cumulants) {
  return {TransformKind::R, TruncatedSeries::from_real(cumulants.kappa)};
}

TransformSeries blue_series(const TransformSeries& r) {
  require_kind(r, TransformKind::R, "blue_series");
  return {TransformKind::B, one_plus(multiply_by_z(r.series))};
}

CumulantData cumulants_of(const TransformSeries& r) {
  require_kind(r, TransformKind::R, "cumulants_of");
  return {r.series.real_coeffs()};
}

MomentData moments_of(const TransformSeries& m) {
  require_kind(m, TransformKind::M, "moments_of");
  return {m.series.real_coeffs()};
}

CumulantData cumulants_from_moments(const MomentData& moments) {
  if (moments.m.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one moment");
  const std::size_t k = moments.m.size();
  // G(1/u) = u + m_1 u^2 + ... ; its inverse phi satisfies 1/phi(w) = B(w).
  const TruncatedSeries phi = compositional_inverse(green_series(moments).series);
  const TruncatedSeries zb = reciprocal(divide_by_z(phi));  // 1 + w R(w), order K
  CumulantData out;
  out.kappa.resize(k);
  for (std::size_t n = 1; n <= k; ++n) out.kappa[n - 1] = zb[n].real();
  return out;
}

MomentData moments_from_cumulants(const CumulantData& cumulants) {
  if (cumulants.kappa.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one cumulant");
  const std::size_t k = cumulants.kappa.size();
  const TruncatedSeries zb = blue_series(r_series(cumulants)).series;  // order K
  const TruncatedSeries phi = multiply_by_z(reciprocal(zb));            // w / (w B(w))
  const TruncatedSeries g = compositional_inverse(phi);
  MomentData out;
  out.m.resize(k);
  for (std::size_t n = 1; n <= k; ++n) out.m[n - 1] = g[n + 1].real();
  return out;
}

// --- S-transform -----------------------------------------------------------

TransformSeries r_to_s(const TransformSeries& r) {
  require_kind(r, TransformKind::R, "r_to_s");
  if (std::abs(r.series[0]) <= kSeriesTolerance) {
    throw Error(ErrorKind::ZeroMean, "S-transform needs a non-zero mean (R(0) = 0)");
  }
  return {TransformKind::S, tilde_inverse(r.series)};
}

TransformSeries s_to_r(const TransformSeries& s) {
  require_kind(s, TransformKind::S, "s_to_r");
  if (std::abs(s.series[0]) <= kSeriesTolerance) {
    throw Error(ErrorKind::InconsistentInput, "S(0) = 1/mean must be non-zero");
  }
  return {TransformKind::R, tilde_inverse(s.series)};
}

// --- R-diagonal relations --------------------------------------------------

TransformSeries a_to_k(const DeterminingSequence& a) {
  if (std::abs(a.a[0]) <= kSeriesTolerance) {
    throw Error(ErrorKind::ZeroFirstCumulant, "K-transform needs alpha_1 != 0");
  }
  return {TransformKind::K, tilde_inverse(a.a)};
}

DeterminingSequence k_to_a(const TransformSeries& k) {
  require_kind(k, TransformKind::K, "k_to_a");
  if (std::abs(k.series[0]) <= kSeriesTolerance) {
    throw Error(ErrorKind::ZeroFirstCumulant, "K(0) = 1/alpha_1 must be non-zero");
  }
  return {tilde_inverse(k.series)};
}

TransformSeries s_from_k(const TransformSeries& k) {
  require_kind(k, TransformKind::K, "s_from_k");
  const TruncatedSeries one_plus_t = one_plus(TruncatedSeries::identity(k.series.order()));
  return {TransformKind::S, k.series * reciprocal(one_plus_t)};
}

TransformSeries k_from_s(const TransformSeries& s) {
  require_kind(s, TransformKind::S, "k_from_s");
  const TruncatedSeries one_plus_t = one_plus(TruncatedSeries::identity(s.series.order()));
  return {TransformKind::K, s.series * one_plus_t};
}

TransformSeries s_from_a(const DeterminingSequence& a) {
  if (std::abs(a.a[0]) <= kSeriesTolerance) {
    throw Error(ErrorKind::ZeroFirstCumulant, "S-transform of XX^dagger needs alpha_1 != 0");
  }
  const TruncatedSeries u = multiply_by_z(a.a);  // z A(z)
  const TruncatedSeries rhs = reciprocal(a.a * one_plus(u));
  return {TransformKind::S, compose(rhs, compositional_inverse(u))};
}

DeterminingSequence a_from_r(const TransformSeries& r) {
  require_kind(r, TransformKind::R, "a_from_r");
  if (r.series[0].real() <= kSeriesTolerance) {
    throw Error(ErrorKind::InconsistentInput,
                "R of XX^dagger for a non-zero R-diagonal operator needs kappa_1 > 0");
  }
  const std::size_t order = r.series.order();
  const TruncatedSeries z = TruncatedSeries::identity(order);
  auto residual = [&](const TruncatedSeries& a) {
    const TruncatedSeries one_plus_za = one_plus(z * a);
    const TruncatedSeries arg = z * reciprocal(one_plus_za);
    return compose(r.series, arg) - one_plus_za * a;
  };
  return {solve_order_by_order(order, residual)};
}

TransformSeries r_from_a(const DeterminingSequence& a) {
  if (std::abs(a.a[0]) <= kSeriesTolerance) {
    throw Error(ErrorKind::ZeroFirstCumulant, "R of XX^dagger needs alpha_1 != 0");
  }
  const std::size_t order = a.a.order();
  const TruncatedSeries z = TruncatedSeries::identity(order);
  // z B(z) = 1 + z R and z^2 B(z) = z (1 + z R).
  auto residual = [&](const TruncatedSeries& r) {
    const TruncatedSeries zb = one_plus(z * r);
    return r - zb * compose(a.a, z * zb);
  };
  return {TransformKind::R, solve_order_by_order(order, residual)};
}

DeterminingSequence rdiagonal_add(const DeterminingSequence& a1, const DeterminingSequence& a2) {
  return {a1.a + a2.a};
}

TransformSeries rdiagonal_multiply(const TransformSeries& s1, const TransformSeries& s2) {
  require_kind(s1, TransformKind::S, "rdiagonal_multiply");
  require_kind(s2, TransformKind::S, "rdiagonal_multiply");
  return {TransformKind::S, s1.series * s2.series};
}

TransformSeries hermitian_multiply(const TransformSeries& r1, const TransformSeries& r2) {
  require_kind(r1, TransformKind::R, "hermitian_multiply");
  require_kind(r2, TransformKind::R, "hermitian_multiply");
  if (std::abs(r1.series[0]) <= kSeriesTolerance && std::abs(r2.series[0]) <= kSeriesTolerance) {
    throw Error(ErrorKind::ZeroMean, "R-route product needs at least one non-zero mean");
  }
  const std::size_t order = std::min(r1.series.order(), r2.series.order());
  const TruncatedSeries z = TruncatedSeries::identity(order);
  TruncatedSeries x(order);
  TruncatedSeries y(order);
  // Each sweep fixes one more coefficient of x and y.
  for (std::size_t sweep = 0; sweep <= order + 1; ++sweep) {
    const TruncatedSeries x_next = z * compose(r2.series, y);
    const TruncatedSeries y_next = z * compose(r1.series, x_next);
    x = x_next;
    y = y_next;
  }
  const TruncatedSeries x_check = z * compose(r2.series, y);
  const TruncatedSeries y_check = z * compose(r1.series, x);
  if (!x_check.approx_equal(x, 1e-9) || !y_check.approx_equal(y, 1e-9)) {
    throw Error(ErrorKind::NoConvergence, "coupled fixed point for the R-route product did not settle");
  }
  return {TransformKind::R, compose(r1.series, x) * compose(r2.series, y)};
}

TransformSeries hermitian_multiply_via_s(const TransformSeries& r1, const TransformSeries& r2) {
  return s_to_r(rdiagonal_multiply(r_to_s(r1), r_to_s(r2)));
}

TransformSeries hermitian_part_r(const DeterminingSequence& a) {
  const std::size_t k = a.length();
  TruncatedSeries out(2 * k - 1);
  for (std::size_t n = 1; n <= k; ++n) out.set(2 * n - 1, 2.0 * a.alpha(n));
  return {TransformKind::R, out};
}

TransformSeries commutator_r(const TransformSeries& r_p2) {
  require_kind(r_p2, TransformKind::R, "commutator_r");
  return {TransformKind::R, r_p2.series - rescale_argument(r_p2.series, -1.0)};
}

// --- densities ---------------------------------------------------------------

namespace {

/// Newton on R(G) + 1/G = z from `guess`; empty optional on failure.
bool newton_green(const AnalyticFunction& r, cplx z, cplx& g) {
  for (int it = 0; it < 60; ++it) {
    const cplx f = r(g) + 1.0 / g - z;
    const cplx df = r.deriv(g) - 1.0 / (g * g);
    if (!std::isfinite(std::abs(df)) || std::abs(df) == 0.0) return false;
    const cplx step = f / df;
    g -= step;
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) return false;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(g))) return true;
  }
  const cplx f = r(g) + 1.0 / g - z;
  return std::abs(f) <= 1e-12 * (1.0 + std::abs(z));
}

}  // namespace

cplx solve_green(const AnalyticFunction& r, cplx z) {
  if (z.imag() <= 0.0) throw Error(ErrorKind::InvalidArgument, "solve_green needs Im z > 0");
  const double top = 1e3 * (1.0 + std::abs(z.real()));
  cplx g = 1.0 / cplx(z.real(), top);
  if (!newton_green(r, cplx(z.real(), top), g) || g.imag() > 0.0) {
    throw Error(ErrorKind::NoValidBranch, "no Herglotz root far above the real axis");
  }
  double y = top;
  double factor = 0.8;
  while (y > z.imag()) {
    const double y_next = std::max(z.imag(), y * factor);
    cplx trial = g;
    if (newton_green(r, cplx(z.real(), y_next), trial) && trial.imag() <= 1e-14 &&
        std::abs(trial - g) <= 0.25 * std::abs(g) + 1e-12) {
      g = trial;
      y = y_next;
      factor = std::min(0.8, factor * 0.8 + 0.2 * 0.5);
    } else {
      factor = 1.0 - 0.5 * (1.0 - factor);
      if (1.0 - factor < 1e-9) {
        throw Error(ErrorKind::NoValidBranch, "lost the Herglotz branch while approaching the real axis");
      }
    }
  }
  if (g.imag() > 1e-12) throw Error(ErrorKind::NoValidBranch, "solution violates Im G < 0");
  return g;
}

double stieltjes_density(const AnalyticFunction& r, double x, const StieltjesOptions& opts) {
  if (!(opts.epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  const double rho = -solve_green(r, cplx(x, opts.epsilon)).imag() / std::numbers::pi;
  if (!opts.richardson) return rho;
  const double rho_half = -solve_green(r, cplx(x, 0.5 * opts.epsilon)).imag() / std::numbers::pi;
  return 2.0 * rho_half - rho;
}

double stieltjes_density(const TransformSeries& r, double x, const StieltjesOptions& opts) {
  require_kind(r, TransformKind::R, "stieltjes_density");
  return stieltjes_density(AnalyticFunction::from_series(r.series), x, opts);
}

}  // namespace ringlab
