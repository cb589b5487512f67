#include "ringlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ringlab/ensembles.hpp"
#include "ringlab/error.hpp"
#include "ringlab/transforms.hpp"

namespace ringlab {
namespace {

CheckResult check(std::string name, double error, double tol) {
  return {std::move(name), error, tol, error <= tol};
}

/// alpha_1 in [0.5, 1.5], alpha_n uniform in [-1, 1] / 2^n. Without the
/// decay the S <-> R inversions lose every digit well before length 32.
constexpr double kDecay = 0.5;

DeterminingSequence random_a(std::mt19937_64& rng, std::size_t length) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> alphas(length);
  double scale = 1.0;
  for (auto& x : alphas) {
    scale *= kDecay;
    x = scale * u(rng);
  }
  alphas[0] = 1.0 + alphas[0];
  return DeterminingSequence::from_alphas(alphas);
}

/// Largest |x_n - y_n| / w_n, where w_n is the largest coefficient magnitude
/// up to index n among `y` and the intermediate series of the computation.
double scaled_error(const TruncatedSeries& x, const TruncatedSeries& y,
                    std::initializer_list<const TruncatedSeries*> intermediates) {
  double scale = 1.0;
  double err = 0.0;
  for (std::size_t n = 0; n <= std::min(x.order(), y.order()); ++n) {
    scale = std::max(scale, std::abs(y[n]));
    for (const auto* s : intermediates) scale = std::max(scale, std::abs(s->coeff(n)));
    err = std::max(err, std::abs(x[n] - y[n]) / scale);
  }
  return err;
}

TruncatedSeries alternating_catalan(std::size_t length) {
  std::vector<double> c(length);
  double cat = 1.0;
  for (std::size_t n = 0; n < length; ++n) {
    c[n] = (n % 2 == 0 ? 1.0 : -1.0) * cat;
    cat = cat * 2.0 * (2.0 * n + 1.0) / (n + 2.0);
  }
  return TruncatedSeries::from_real(c);
}

}  // namespace

double default_verify_tolerance(std::size_t order) { return order <= 10 ? 1e-9 : 1e-8; }

double coefficient_error(const TruncatedSeries& x, const TruncatedSeries& y) {
  const std::size_t n = std::min(x.order(), y.order());
  double err = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    err = std::max(err, std::abs(x[k] - y[k]) / std::max(1.0, std::abs(y[k])));
  }
  return err;
}

std::vector<CheckResult> identity_checks(const VerifyOptions& options) {
  if (options.order < 2) throw Error(ErrorKind::InvalidArgument, "verify needs order >= 2");
  const double tol = options.tolerance.value_or(default_verify_tolerance(options.order));
  std::mt19937_64 rng(options.seed);

  double triangle = 0.0, ar = 0.0, rs = 0.0, ak = 0.0;
  for (std::size_t t = 0; t < options.trials; ++t) {
    const auto a = random_a(rng, options.order);
    const auto direct = s_from_a(a).series;
    const auto k = a_to_k(a).series;
    const auto r = r_from_a(a).series;
    const auto s_r = r_to_s({TransformKind::R, r}).series;
    // The R leg is compared in R-space, where its coefficients are largest
    // and the comparison is well conditioned.
    triangle = std::max({triangle, scaled_error(s_from_k({TransformKind::K, k}).series, direct, {&a.a, &k}),
                         scaled_error(s_to_r({TransformKind::S, direct}).series, r, {&a.a})});
    ar = std::max(ar, scaled_error(a_from_r({TransformKind::R, r}).a, a.a, {&r}));
    rs = std::max(rs, scaled_error(s_to_r({TransformKind::S, s_r}).series, r, {&s_r}));
    ak = std::max(ak, scaled_error(k_to_a({TransformKind::K, k}).a, a.a, {&k}));
  }
  std::vector<CheckResult> out;
  out.push_back(check("triangle_identity", triangle, tol));
  out.push_back(check("a_r_round_trip", ar, tol));
  out.push_back(check("r_s_round_trip", rs, tol));
  out.push_back(check("a_k_round_trip", ak, tol));

  const int nc_max = static_cast<int>(std::min<std::size_t>(8, options.order));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double nc = 0.0;
  for (std::size_t t = 0; t < options.trials; ++t) {
    MomentData m{std::vector<double>(nc_max)};
    for (auto& x : m.m) x = u(rng);
    const auto kappa = cumulants_from_moments(m).kappa;
    for (int n = 1; n <= nc_max; ++n) nc = std::max(nc, std::abs(nc_cumulant_oracle(m, n) - kappa[n - 1]));
  }
  out.push_back(check("nc_oracle", nc, std::min(tol, 1e-10)));

  out.push_back(check("haar_alternating_catalan",
                      coefficient_error(determining_sequence(EnsembleSpec::haar(), options.order).a,
                                        alternating_catalan(options.order)),
                      tol));

  double product = 0.0;
  for (int k = 2; k <= 4; ++k) {
    const std::size_t len = std::min<std::size_t>(options.order, 8);
    const auto a = determining_sequence(EnsembleSpec::ginibre_product(k), len);
    for (std::size_t n = 1; n <= len; ++n) {
      const double expect = static_cast<double>(raney(n - 1, k - 1, k - 1));
      product = std::max(product, std::abs(a.alpha(n) - expect) / expect);
    }
  }
  out.push_back(check("product_raney", product, tol));

  const double q = 2.0;
  const auto s_poisson = s_from_a(determining_sequence(EnsembleSpec::free_poisson(q), options.order)).series;
  // 1/((1+z)(q+z)) = sum_n z^n (-1)^n (1 - q^-(n+1)) / (q - 1)
  std::vector<double> closed(options.order);
  for (std::size_t n = 0; n < closed.size(); ++n) {
    closed[n] = (n % 2 == 0 ? 1.0 : -1.0) * (1.0 - std::pow(q, -double(n + 1))) / (q - 1.0);
  }
  out.push_back(check("poisson_s_closed_form", coefficient_error(s_poisson, TruncatedSeries::from_real(closed)), tol));
  return out;
}

std::vector<CheckResult> document_checks(const SeriesDocument& doc, double tol) {
  std::vector<CheckResult> out;
  const auto& s = doc.series;
  if (doc.kind == "moments") {
    const MomentData m{s.real_coeffs()};
    const auto kappa = cumulants_from_moments(m);
    out.push_back(check("moments_round_trip",
                        coefficient_error(TruncatedSeries::from_real(moments_from_cumulants(kappa).m), s), tol));
    const int nc_max = static_cast<int>(std::min<std::size_t>(8, m.m.size()));
    double nc = 0.0;
    for (int n = 1; n <= nc_max; ++n) nc = std::max(nc, std::abs(nc_cumulant_oracle(m, n) - kappa.kappa[n - 1]));
    out.push_back(check("nc_oracle", nc, tol));
    return out;
  }
  const TransformKind kind = transform_kind_from_string(doc.kind);
  switch (kind) {
    case TransformKind::A: {
      const DeterminingSequence a{s};
      const auto r = r_from_a(a);
      out.push_back(check("a_r_round_trip", coefficient_error(a_from_r(r).a, s), tol));
      out.push_back(check("a_k_round_trip", coefficient_error(k_to_a(a_to_k(a)).a, s), tol));
      const auto direct = s_from_a(a).series;
      out.push_back(check("triangle_identity",
                          std::max(coefficient_error(s_from_k(a_to_k(a)).series, direct),
                                   coefficient_error(r_to_s(r).series, direct)),
                          tol));
      break;
    }
    case TransformKind::R: {
      const TransformSeries r{TransformKind::R, s};
      out.push_back(check("r_s_round_trip", coefficient_error(s_to_r(r_to_s(r)).series, s), tol));
      out.push_back(check("r_a_round_trip", coefficient_error(r_from_a(a_from_r(r)).series, s), tol));
      break;
    }
    case TransformKind::S: {
      const TransformSeries sv{TransformKind::S, s};
      out.push_back(check("s_r_round_trip", coefficient_error(r_to_s(s_to_r(sv)).series, s), tol));
      out.push_back(check("s_k_round_trip", coefficient_error(s_from_k(k_from_s(sv)).series, s), tol));
      break;
    }
    case TransformKind::K: {
      const TransformSeries k{TransformKind::K, s};
      out.push_back(check("k_a_round_trip", coefficient_error(a_to_k(k_to_a(k)).series, s), tol));
      break;
    }
    default:
      throw Error(ErrorKind::KindMismatch, "no round trips for kind " + doc.kind);
  }
  return out;
}

}  // namespace ringlab
