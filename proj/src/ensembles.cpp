#include "ringlab/ensembles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ringlab/error.hpp"

namespace ringlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// A(x) for the k-fold Ginibre product at real x = -p <= 0: the root of
/// A = (1 - p A)^(k-1) in [0, min(1, 1/p)].
double product_a_real(int k, double x) {
  const double p = -x;
  double lo = 0.0;
  double hi = p > 1.0 ? 1.0 / p : 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double h = mid - std::pow(1.0 - p * mid, k - 1);
    (h < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void require_real_nonpositive(cplx x) {
  if (x.imag() != 0.0 || x.real() > 0.0) {
    throw Error(ErrorKind::EvaluationDomain, "product A(x) is tabulated for real x <= 0 only");
  }
}

}  // namespace

EnsembleSpec EnsembleSpec::ginibre(double v) { return {EnsembleVariant::Ginibre, v, 1, 1.0}; }
EnsembleSpec EnsembleSpec::haar() { return {EnsembleVariant::HaarUnitary, 1.0, 1, 1.0}; }
EnsembleSpec EnsembleSpec::ginibre_product(int k) { return {EnsembleVariant::GinibreProduct, 1.0, k, 1.0}; }
EnsembleSpec EnsembleSpec::free_poisson(double q) { return {EnsembleVariant::FreePoissonNH, 1.0, 1, q}; }
EnsembleSpec EnsembleSpec::commutator(double v) { return {EnsembleVariant::CommutatorGinibre, v, 1, 1.0}; }

void EnsembleSpec::validate() const {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "variance must be positive");
  if (variant == EnsembleVariant::GinibreProduct && k < 1) {
    throw Error(ErrorKind::InvalidArgument, "product needs k >= 1");
  }
  if (variant == EnsembleVariant::FreePoissonNH && (!(q > 0.0) || !std::isfinite(q))) {
    throw Error(ErrorKind::InvalidArgument, "free Poisson needs q > 0");
  }
}

std::string EnsembleSpec::name() const {
  switch (variant) {
    case EnsembleVariant::Ginibre: return "ginibre(v=" + std::to_string(v) + ")";
    case EnsembleVariant::HaarUnitary: return "haar";
    case EnsembleVariant::GinibreProduct: return "ginibre_product(k=" + std::to_string(k) + ")";
    case EnsembleVariant::FreePoissonNH: return "poisson(q=" + std::to_string(q) + ")";
    case EnsembleVariant::CommutatorGinibre: return "commutator(v=" + std::to_string(v) + ")";
  }
  return "?";
}

const char* to_string(EnsembleVariant variant) noexcept {
  switch (variant) {
    case EnsembleVariant::Ginibre: return "ginibre";
    case EnsembleVariant::HaarUnitary: return "haar";
    case EnsembleVariant::GinibreProduct: return "product";
    case EnsembleVariant::FreePoissonNH: return "poisson";
    case EnsembleVariant::CommutatorGinibre: return "commutator";
  }
  return "?";
}

EnsembleVariant ensemble_variant_from_string(const std::string& name) {
  if (name == "ginibre") return EnsembleVariant::Ginibre;
  if (name == "haar") return EnsembleVariant::HaarUnitary;
  if (name == "product" || name == "ginibre_product") return EnsembleVariant::GinibreProduct;
  if (name == "poisson" || name == "free_poisson") return EnsembleVariant::FreePoissonNH;
  if (name == "commutator") return EnsembleVariant::CommutatorGinibre;
  throw Error(ErrorKind::Parse, "unknown ensemble '" + name + "'");
}

void to_json(nlohmann::json& j, const EnsembleSpec& spec) {
  nlohmann::json params = nlohmann::json::object();
  switch (spec.variant) {
    case EnsembleVariant::Ginibre:
    case EnsembleVariant::CommutatorGinibre: params["v"] = spec.v; break;
    case EnsembleVariant::GinibreProduct: params["k"] = spec.k; break;
    case EnsembleVariant::FreePoissonNH: params["q"] = spec.q; break;
    case EnsembleVariant::HaarUnitary: break;
  }
  j = {{"variant", to_string(spec.variant)}, {"params", params}};
}

void from_json(const nlohmann::json& j, EnsembleSpec& spec) {
  try {
    spec = EnsembleSpec{};
    spec.variant = ensemble_variant_from_string(j.at("variant").get<std::string>());
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    spec.v = params.value("v", 1.0);
    spec.k = params.value("k", 1);
    spec.q = params.value("q", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("ensemble spec: ") + e.what());
  }
  spec.validate();
}

DeterminingSequence determining_sequence(const EnsembleSpec& spec, std::size_t length) {
  spec.validate();
  if (length == 0) throw Error(ErrorKind::InvalidArgument, "determining sequence needs length >= 1");
  const std::size_t order = length - 1;
  const TruncatedSeries z = TruncatedSeries::identity(order);
  const TruncatedSeries one = TruncatedSeries::constant(1.0, order);
  switch (spec.variant) {
    case EnsembleVariant::Ginibre:
      return {TruncatedSeries::constant(spec.v, order)};
    case EnsembleVariant::HaarUnitary:
      // z A^2 + A - 1 = 0, branch A(0) = 1.
      return {solve_order_by_order(order, [&](const TruncatedSeries& a) { return z * a * a + a - one; })};
    case EnsembleVariant::GinibreProduct: {
      const auto k = static_cast<unsigned>(spec.k);
      return {solve_order_by_order(
          order, [&](const TruncatedSeries& a) { return power(z * a + one, k - 1) - a; })};
    }
    case EnsembleVariant::FreePoissonNH: {
      // q / (1 - z)
      TruncatedSeries a(order);
      for (std::size_t n = 0; n <= order; ++n) a.set(n, spec.q);
      return {a};
    }
    case EnsembleVariant::CommutatorGinibre:
      break;
  }
  throw Error(ErrorKind::UnsupportedVariant, "the commutator is Hermitian and has no determining sequence");
}

AnalyticFunction determining_function(const EnsembleSpec& spec) {
  spec.validate();
  switch (spec.variant) {
    case EnsembleVariant::Ginibre:
      return AnalyticFunction::constant(spec.v);
    case EnsembleVariant::HaarUnitary:
      return {[](cplx x) { return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * x)); },
              [](cplx x) {
                const cplx r = std::sqrt(1.0 + 4.0 * x);
                return -4.0 / (r * (1.0 + r) * (1.0 + r));
              }};
    case EnsembleVariant::GinibreProduct: {
      const int k = spec.k;
      if (k == 1) return AnalyticFunction::constant(1.0);
      return {[k](cplx x) {
                require_real_nonpositive(x);
                return cplx(product_a_real(k, x.real()));
              },
              [k](cplx x) {
                require_real_nonpositive(x);
                const double a = product_a_real(k, x.real());
                const double base = x.real() * a + 1.0;
                const double dh = (k - 1) * std::pow(base, k - 2);
                return cplx(dh * a / (1.0 - dh * x.real()));
              }};
    }
    case EnsembleVariant::FreePoissonNH: {
      const double q = spec.q;
      return {[q](cplx x) { return q / (1.0 - x); }, [q](cplx x) { return q / ((1.0 - x) * (1.0 - x)); }};
    }
    case EnsembleVariant::CommutatorGinibre:
      break;
  }
  throw Error(ErrorKind::UnsupportedVariant, "the commutator is Hermitian and has no determining sequence");
}

AnalyticFunction s_transform_function(const EnsembleSpec& spec) {
  spec.validate();
  switch (spec.variant) {
    case EnsembleVariant::Ginibre: {
      const double v = spec.v;
      return {[v](cplx z) { return 1.0 / (v * (1.0 + z)); },
              [v](cplx z) { return -1.0 / (v * (1.0 + z) * (1.0 + z)); }};
    }
    case EnsembleVariant::HaarUnitary:
      return AnalyticFunction::constant(1.0);
    case EnsembleVariant::GinibreProduct: {
      const int k = spec.k;
      return {[k](cplx z) { return std::pow(1.0 + z, -k); },
              [k](cplx z) { return -static_cast<double>(k) * std::pow(1.0 + z, -k - 1); }};
    }
    case EnsembleVariant::FreePoissonNH: {
      const double q = spec.q;
      return {[q](cplx z) { return 1.0 / ((1.0 + z) * (q + z)); },
              [q](cplx z) {
                const cplx d = (1.0 + z) * (q + z);
                return -(q + 1.0 + 2.0 * z) / (d * d);
              }};
    }
    case EnsembleVariant::CommutatorGinibre:
      break;
  }
  throw Error(ErrorKind::UnsupportedVariant, "the commutator has no single-ring S-transform");
}

SingleRingModel single_ring_model(const EnsembleSpec& spec) {
  SingleRingModel model;
  model.s = s_transform_function(spec);
  model.label = spec.name();
  switch (spec.variant) {
    case EnsembleVariant::Ginibre:
      model.moment1 = spec.v;
      model.inv_moment1 = kInf;
      break;
    case EnsembleVariant::HaarUnitary:
      model.moment1 = 1.0;
      model.inv_moment1 = 1.0;
      break;
    case EnsembleVariant::GinibreProduct:
      model.moment1 = 1.0;
      model.inv_moment1 = kInf;
      break;
    case EnsembleVariant::FreePoissonNH:
      model.zero_mode_fraction = std::max(0.0, 1.0 - spec.q);
      model.moment1 = spec.q;
      model.inv_moment1 = kInf;
      break;
    case EnsembleVariant::CommutatorGinibre:
      break;
  }
  return model;
}

std::uint64_t raney(unsigned n, unsigned p, unsigned r) {
  if (r == 0) throw Error(ErrorKind::InvalidArgument, "raney needs r >= 1");
  using u128 = unsigned __int128;
  constexpr u128 kLimit = static_cast<u128>(std::numeric_limits<std::uint64_t>::max());
  const u128 m = static_cast<u128>(n) * p + r;
  // binom(m, n), exact at every step; the running value stays <= final * m.
  u128 binom = 1;
  for (unsigned i = 0; i < n; ++i) {
    const u128 factor = m - i;
    if (binom > (kLimit * kLimit) / factor) throw Error(ErrorKind::Overflow, "raney number overflows");
    binom = binom * factor / (i + 1);
  }
  if (binom > (kLimit * kLimit) / r) throw Error(ErrorKind::Overflow, "raney number overflows");
  const u128 numer = binom * r;
  if (numer % m != 0) throw Error(ErrorKind::InvalidArgument, "raney quotient is not integral");
  const u128 value = numer / m;
  if (value > kLimit) throw Error(ErrorKind::Overflow, "raney number overflows");
  return static_cast<std::uint64_t>(value);
}

ReferencePoint reference_profile(const EnsembleSpec& spec, double s) {
  spec.validate();
  if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  ReferencePoint pt;
  switch (spec.variant) {
    case EnsembleVariant::Ginibre: {
      const double v = spec.v;
      if (s * s >= v) return {1.0, 0.0, 0.0};
      return {s * s / v, 1.0 / (kPi * v), (v - s * s) / (kPi * v * v)};
    }
    case EnsembleVariant::HaarUnitary:
      return {s < 1.0 ? 0.0 : 1.0, 0.0, 0.0};
    case EnsembleVariant::GinibreProduct: {
      const double k = spec.k;
      if (s >= 1.0) return {1.0, 0.0, 0.0};
      const double f = std::pow(s, 2.0 / k);
      return {f, std::pow(s, 2.0 / k - 2.0) / (k * kPi), std::pow(s, 2.0 / k - 2.0) * (1.0 - f) / kPi};
    }
    case EnsembleVariant::FreePoissonNH: {
      const double q = spec.q;
      if (s >= std::sqrt(q)) return {1.0, 0.0, 0.0};
      const double root = std::sqrt((q - 1.0) * (q - 1.0) + 4.0 * s * s);
      pt.F = (1.0 - q + root) / 2.0;
      pt.rho = 1.0 / (kPi * root);
      pt.O = (q * root - q * q + q - 2.0 * s * s) / (2.0 * kPi * s * s);
      return pt;
    }
    case EnsembleVariant::CommutatorGinibre:
      break;
  }
  throw Error(ErrorKind::UnsupportedVariant, "no radial closed form for the commutator");
}

double commutator_variance(const EnsembleSpec& spec, CommutatorConvention convention) {
  if (spec.variant != EnsembleVariant::CommutatorGinibre) {
    throw Error(ErrorKind::UnsupportedVariant, "commutator conventions apply to the commutator only");
  }
  spec.validate();
  return convention == CommutatorConvention::Spec ? spec.v : 1.0 / std::sqrt(2.0);
}

TransformSeries commutator_reference(const EnsembleSpec& spec, std::size_t order,
                                     CommutatorConvention convention) {
  const double v = commutator_variance(spec, convention);
  TruncatedSeries r_p2(order);
  double vn = v;
  for (std::size_t n = 0; n <= order; ++n, vn *= v) r_p2.set(n, vn);
  return commutator_r({TransformKind::R, r_p2});
}

AnalyticFunction commutator_r_function(const EnsembleSpec& spec, CommutatorConvention convention) {
  const double v2 = std::pow(commutator_variance(spec, convention), 2);
  return {[v2](cplx z) { return 2.0 * v2 * z / (1.0 - v2 * z * z); },
          [v2](cplx z) {
            const cplx d = 1.0 - v2 * z * z;
            return 2.0 * v2 * (1.0 + v2 * z * z) / (d * d);
          }};
}

}  // namespace ringlab
