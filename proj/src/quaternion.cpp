#include "ringlab/quaternion.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "ringlab/error.hpp"

namespace ringlab {
namespace {

const cplx kI{0.0, 1.0};

struct Reduced {
  double z2;  // |z|^2
  double p(double d) const { return std::max(0.0, d - z2 * d * d); }
  double dp(double d) const { return 1.0 - 2.0 * z2 * d; }
};

double real_a(const AnalyticFunction& a, double x) { return a(cplx(x, 0.0)).real(); }

/// Bisection to full precision on a bracket with f(lo) < 0 < f(hi).
template <typename F>
double bisect(F&& f, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double residual(const AnalyticFunction& a, const QGreenValue& g, const QuaternionPoint& q) {
  const Eigen::Matrix2cd gm = g.matrix();
  const Eigen::Matrix2cd res = quaternionic_r(a, gm) + gm.inverse() - q.matrix();
  return res.cwiseAbs().maxCoeff();
}

/// Upper end of the D-range: 1/|z|^2, or a point with phi > 0 when z = 0.
template <typename F>
double bracket_top(const Reduced& red, F&& phi) {
  if (red.z2 > 0.0) return 1.0 / red.z2;
  double hi = 1.0;
  for (int it = 0; it < 200 && phi(hi) <= 0.0; ++it) hi *= 2.0;
  return hi;
}

std::optional<double> nontrivial_root(const AnalyticFunction& a, const Reduced& red) {
  // A(-p(D)) = 1/D with p > 0.
  auto psi = [&](double d) { return real_a(a, -red.p(d)) - 1.0 / d; };
  if (red.z2 > 0.0 && real_a(a, 0.0) <= red.z2) return std::nullopt;
  double hi = red.z2 > 0.0 ? 1.0 / red.z2 : 1.0;
  if (red.z2 == 0.0) {
    for (int it = 0; it < 200 && psi(hi) <= 0.0; ++it) hi *= 2.0;
    if (psi(hi) <= 0.0) return std::nullopt;
  }
  return bisect(psi, 0.0, hi);
}

}  // namespace

Eigen::Matrix2cd QuaternionPoint::matrix() const {
  Eigen::Matrix2cd m;
  m << z, kI * std::conj(w), kI * w, std::conj(z);
  return m;
}

Eigen::Matrix2cd QGreenValue::matrix() const {
  Eigen::Matrix2cd m;
  m << g11, g1w, gw1(), g1bar1bar();
  return m;
}

Eigen::Matrix2cd quaternionic_r(const AnalyticFunction& a, const Eigen::Matrix2cd& q) {
  const cplx prefactor = a(q(0, 1) * q(1, 0));
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  r(0, 1) = prefactor * q(0, 1);
  r(1, 0) = prefactor * q(1, 0);
  return r;
}

Eigen::Matrix2cd quaternionic_r(const DeterminingSequence& a, const Eigen::Matrix2cd& q) {
  return quaternionic_r(AnalyticFunction::from_series(a.a), q);
}

QGreenValue solve_sd(const AnalyticFunction& a, cplx z, cplx w, const SdOptions& opts) {
  const Reduced red{std::norm(z)};
  const QuaternionPoint q{z, w};
  const double wabs = std::abs(w);

  if (wabs == 0.0) {
    const std::optional<double> root = nontrivial_root(a, red);
    SdBranch branch = opts.branch;
    if (branch == SdBranch::Physical) {
      if (root) {
        throw Error(ErrorKind::AmbiguousBranch,
                    "both branches solve the equation at w = 0; request one explicitly");
      }
      branch = SdBranch::Trivial;
    }
    if (branch == SdBranch::Trivial) {
      if (z == cplx{}) throw Error(ErrorKind::NoValidBranch, "trivial branch is singular at z = 0");
      return {1.0 / z, 0.0};
    }
    if (!root) throw Error(ErrorKind::NoValidBranch, "no nontrivial solution at this z");
    const double d = *root;
    QGreenValue g{std::conj(z) * d, std::sqrt(red.p(d))};
    if (residual(a, g, q) > opts.residual_tol) {
      throw Error(ErrorKind::NoConvergence, "nontrivial branch failed the residual check");
    }
    return g;
  }

  // sqrt(p) (A(-p) - 1/D) + |w| = 0; the bracket ends have phi = -inf and +|w|.
  auto phi = [&](double d) {
    const double p = red.p(d);
    return std::sqrt(p) * (real_a(a, -p) - 1.0 / d) + wabs;
  };
  double hi = bracket_top(red, phi);
  if (phi(hi) <= 0.0) throw Error(ErrorKind::NoValidBranch, "no sign change for the regularized equation");
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  // Safeguarded Newton polish.
  double d = 0.5 * (lo + hi);
  for (int it = 0; it < 20; ++it) {
    const double p = red.p(d);
    if (p <= 0.0) break;
    const double sp = std::sqrt(p);
    const double ap = real_a(a, -p);
    const double dap = a.deriv(cplx(-p, 0.0)).real();
    const double dpd = red.dp(d);
    const double f = sp * (ap - 1.0 / d) + wabs;
    const double df = dpd / (2.0 * sp) * (ap - 1.0 / d) + sp * (-dap * dpd + 1.0 / (d * d));
    if (!(std::abs(df) > 0.0)) break;
    const double next = d - f / df;
    if (!(next > lo && next < hi)) break;
    if (std::abs(next - d) <= 4.0 * std::numeric_limits<double>::epsilon() * d) {
      d = next;
      break;
    }
    d = next;
  }
  const double p = red.p(d);
  const double denom = real_a(a, -p) - 1.0 / d;
  if (!(denom < 0.0)) throw Error(ErrorKind::NoValidBranch, "root violates resolvent positivity");
  // Inside the ring denom suffers cancellation and |g1w| = sqrt(p) is the
  // accurate form; outside p does. Both share the phase of i conj(w) / denom.
  const cplx g1w = std::sqrt(p) >= -denom ? -kI * std::conj(w) / wabs * std::sqrt(p)
                                          : kI * std::conj(w) / denom;
  const QGreenValue g{std::conj(z) * d, g1w};
  if (residual(a, g, q) > opts.residual_tol * std::max(1.0, std::abs(z))) {
    throw Error(ErrorKind::NoConvergence, "regularized solution failed the residual check");
  }
  return g;
}

QGreenValue solve_sd_limit(const AnalyticFunction& a, cplx z, cplx w) {
  const QGreenValue full = solve_sd(a, z, w);
  const QGreenValue half = solve_sd(a, z, 0.5 * w);
  const cplx g11 = 2.0 * half.g11 - full.g11;
  const double weight = std::max(0.0, 2.0 * half.overlap_weight() - full.overlap_weight());
  const double phase_norm = std::abs(half.g1w);
  const cplx g1w = phase_norm > 0.0 ? half.g1w / phase_norm * std::sqrt(weight) : cplx{};
  return {g11, g1w};
}

std::vector<QGreenValue> sweep_radial(const AnalyticFunction& a, const std::vector<double>& radii,
                                      cplx w, double theta, const ExecPolicy& policy) {
  std::vector<QGreenValue> out(radii.size());
  const cplx dir = std::polar(1.0, theta);
  const auto n = static_cast<std::ptrdiff_t>(radii.size());
  if (policy.mode == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = solve_sd(a, radii[i] * dir, w);
    return out;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(resolved_threads(policy))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = solve_sd(a, radii[i] * dir, w);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ringlab
