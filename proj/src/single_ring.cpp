#include "ringlab/single_ring.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "ringlab/error.hpp"

namespace ringlab {
namespace {

constexpr double kBracketPad = 1e-14;
constexpr double kBisectTol = 1e-8;
constexpr double kNewtonTol = 1e-12;
constexpr int kScanPoints = 33;
constexpr double kSlopeTol = 1e-300;

/// S(F - 1) - 1/s^2, with a non-finite S (pole at the bracket end) mapped
/// to +infinity.
double g_value(const SingleRingModel& model, double f, double inv_s2) {
  const double sv = model.s(cplx(f - 1.0, 0.0)).real();
  if (!std::isfinite(sv)) return std::numeric_limits<double>::infinity();
  return sv - inv_s2;
}

}  // namespace

RingRadii ring_radii(const SingleRingModel& model) {
  RingRadii r;
  const double m1 = model.moment1 ? *model.moment1 : 1.0 / model.s(cplx(0.0)).real();
  if (!(m1 > 0.0) || !std::isfinite(m1)) {
    throw Error(ErrorKind::InconsistentInput, "first moment of X X^dagger must be positive and finite");
  }
  r.outer = std::sqrt(m1);
  if (model.inv_moment1) {
    r.inner = std::isinf(*model.inv_moment1) ? 0.0 : std::sqrt(1.0 / *model.inv_moment1);
  } else if (model.zero_mode_fraction > 0.0) {
    r.inner = 0.0;
  } else {
    double s_edge = std::numeric_limits<double>::infinity();
    try {
      s_edge = model.s(cplx(model.zero_mode_fraction - 1.0, 0.0)).real();
    } catch (const Error&) {
    }
    r.inner = (std::isfinite(s_edge) && s_edge > 0.0) ? std::sqrt(1.0 / s_edge) : 0.0;
  }
  r.degenerate = std::abs(r.outer - r.inner) <= 1e-12 * r.outer;
  if (r.degenerate) r.inner = r.outer;
  return r;
}

RadialPoint radial_solve(const SingleRingModel& model, double s) {
  if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  const RingRadii radii = ring_radii(model);
  const double zmf = model.zero_mode_fraction;
  if (s <= radii.inner) return {zmf, false};
  if (s >= radii.outer) return {1.0, false};

  const double inv_s2 = 1.0 / (s * s);
  const double lo0 = zmf + kBracketPad;
  const double hi0 = 1.0 - kBracketPad;

  // Sign scan: count sign changes, keep the topmost bracket.
  RadialPoint out;
  double lo = lo0;
  double hi = hi0;
  int changes = 0;
  double prev_f = lo0;
  double prev_g = g_value(model, lo0, inv_s2);
  for (int i = 1; i < kScanPoints; ++i) {
    const double f = lo0 + (hi0 - lo0) * i / (kScanPoints - 1);
    const double g = g_value(model, f, inv_s2);
    if ((prev_g > 0.0) != (g > 0.0)) {
      ++changes;
      lo = prev_f;
      hi = f;
    }
    prev_f = f;
    prev_g = g;
  }
  if (changes == 0) {
    // The root sits inside the padding next to F = zero_mode_fraction.
    const double s_low = model.s(cplx(lo0 - 1.0, 0.0)).real();
    if (s_low > 0.0 && g_value(model, lo0, inv_s2) <= 0.0) return {zmf, false};
    throw Error(ErrorKind::NoRoot, "S(F - 1) = 1/s^2 has no root at s = " + std::to_string(s));
  }
  out.multiple_roots = changes > 1;

  const bool rising = g_value(model, lo, inv_s2) <= 0.0;
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    const bool below = g_value(model, mid, inv_s2) <= 0.0;
    (below == rising ? lo : hi) = mid;
  }
  double f = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double slope = model.s.deriv(cplx(f - 1.0, 0.0)).real();
    if (!(std::abs(slope) > kSlopeTol)) break;
    const double step = g_value(model, f, inv_s2) / slope;
    const double next = std::clamp(f - step, lo, hi);
    const bool done = std::abs(next - f) <= kNewtonTol;
    f = next;
    if (done) break;
  }
  out.F = f;
  return out;
}

double radial_cdf(const SingleRingModel& model, double s) { return radial_solve(model, s).F; }

double radial_density(const SingleRingModel& model, double s) {
  const RingRadii radii = ring_radii(model);
  if (s <= radii.inner || s >= radii.outer) return 0.0;
  const double f = radial_cdf(model, s);
  const double slope = model.s.deriv(cplx(f - 1.0, 0.0)).real();
  if (!(std::abs(slope) > 1e-12)) {
    throw Error(ErrorKind::EdgeSingularity, "S' vanishes at s = " + std::to_string(s));
  }
  const double dF = -2.0 / (s * s * s * slope);
  return dF / (2.0 * std::numbers::pi * s);
}

double overlap_correlator(const SingleRingModel& model, double s) {
  const double f = radial_cdf(model, s);
  return std::max(0.0, f * (1.0 - f)) / (std::numbers::pi * s * s);
}

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double s) {
  if (x.empty()) return 0.0;
  if (s <= x.front()) return y.front();
  if (s >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double t = (s - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

}  // namespace

double RadialProfile::F_at(double s) const { return interpolate(s_grid, F, s); }
double RadialProfile::O_at(double s) const { return interpolate(s_grid, O, s); }

RadialProfile build_profile(const SingleRingModel& model, const GridSpec& grid, const ExecPolicy& policy) {
  if (grid.points == 0) throw Error(ErrorKind::InvalidArgument, "profile grid needs at least one point");
  RadialProfile prof;
  prof.radii = ring_radii(model);
  prof.zero_mode_fraction = model.zero_mode_fraction;
  prof.label = model.label;
  const std::size_t n = grid.points;
  const double h = prof.radii.outer * (1.0 + grid.margin) / static_cast<double>(n);
  prof.s_grid.resize(n);
  prof.F.resize(n);
  prof.rho.resize(n);
  prof.O.resize(n);
  std::vector<char> multiple(n, 0);

  auto fill = [&](std::size_t i) {
    const double s = (static_cast<double>(i) + 0.5) * h;
    const RadialPoint pt = radial_solve(model, s);
    prof.s_grid[i] = s;
    prof.F[i] = pt.F;
    multiple[i] = pt.multiple_roots;
    prof.rho[i] = prof.radii.degenerate ? 0.0 : radial_density(model, s);
    prof.O[i] = std::max(0.0, pt.F * (1.0 - pt.F)) / (std::numbers::pi * s * s);
  };

  const auto count = static_cast<std::ptrdiff_t>(n);
  if (policy.mode == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) fill(static_cast<std::size_t>(i));
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(resolved_threads(policy))
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        fill(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  prof.multiple_roots = std::any_of(multiple.begin(), multiple.end(), [](char c) { return c != 0; });

  if (prof.radii.degenerate) {
    prof.normalization = 1.0 - model.zero_mode_fraction;
  } else {
    // Each half is mapped by a cubic in t so that integrable edge cusps
    // (rho ~ s^(-4/3) for triple products) become smooth in t.
    const double lo = prof.radii.inner;
    const double hi = prof.radii.outer;
    const double mid = 0.5 * (lo + hi);
    auto mass = [&](double s) { return 2.0 * std::numbers::pi * s * radial_density(model, s); };
    auto lower = [&](double t) { return mass(lo + (mid - lo) * t * t * t) * 3.0 * (mid - lo) * t * t; };
    auto upper = [&](double t) { return mass(hi - (hi - mid) * t * t * t) * 3.0 * (hi - mid) * t * t; };
    using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    prof.normalization = Quad::integrate(lower, 0.0, 1.0, 12, 1e-12) + Quad::integrate(upper, 0.0, 1.0, 12, 1e-12);
  }
  return prof;
}

}  // namespace ringlab
