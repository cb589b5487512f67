#include "ringlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ringlab/error.hpp"

namespace ringlab {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd complex_gaussian(std::size_t rows, std::size_t cols, double variance, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
  Eigen::MatrixXcd m(rows, cols);
  // Column-major fill order fixes the stream consumption.
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

Eigen::MatrixXcd haar_unitary(std::size_t n, std::mt19937_64& rng) {
  const Eigen::MatrixXcd g = complex_gaussian(n, n, 1.0, rng);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  // Dividing out the phases of diag(R) makes Q Haar distributed.
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : cplx(1.0);
  }
  return q;
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

/// Least-squares quadratic y = c0 + c1 x + c2 x^2, evaluated at x0.
double quadratic_extrapolate(const std::vector<double>& x, const std::vector<double>& y, double x0) {
  Eigen::MatrixXd a(x.size(), 3);
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] - x0;
    a(i, 0) = 1.0;
    a(i, 1) = t;
    a(i, 2) = t * t;
    b(i) = y[i];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  return c(0);
}

}  // namespace

std::mt19937_64 sample_rng(const SeedRecord& seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.master), static_cast<std::uint32_t>(seed.master >> 32),
                    static_cast<std::uint32_t>(seed.index), static_cast<std::uint32_t>(seed.index >> 32)};
  return std::mt19937_64(seq);
}

Eigen::MatrixXcd sample_matrix(const EnsembleSpec& spec, std::size_t n, std::mt19937_64& rng) {
  spec.validate();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "matrix size must be at least 2");
  const double dn = static_cast<double>(n);
  switch (spec.variant) {
    case EnsembleVariant::Ginibre:
      return complex_gaussian(n, n, spec.v / dn, rng);
    case EnsembleVariant::HaarUnitary:
      return haar_unitary(n, rng);
    case EnsembleVariant::GinibreProduct: {
      Eigen::MatrixXcd m = complex_gaussian(n, n, 1.0 / dn, rng);
      for (int f = 1; f < spec.k; ++f) m = (m * complex_gaussian(n, n, 1.0 / dn, rng)).eval();
      return m;
    }
    case EnsembleVariant::FreePoissonNH: {
      const auto t = static_cast<std::size_t>(std::llround(spec.q * dn));
      if (t < 1) throw Error(ErrorKind::InvalidArgument, "q N rounds to zero columns");
      const Eigen::MatrixXcd x = complex_gaussian(n, t, 1.0, rng);
      const Eigen::MatrixXcd y = complex_gaussian(n, t, 1.0, rng);
      return x * y.adjoint() / dn;
    }
    case EnsembleVariant::CommutatorGinibre: {
      const Eigen::MatrixXcd x = complex_gaussian(n, n, spec.v / dn, rng);
      return x * x.adjoint() - x.adjoint() * x;
    }
  }
  throw Error(ErrorKind::UnsupportedVariant, "unknown ensemble");
}

SpectralSample eigen_overlaps(const Eigen::MatrixXcd& m, double cond_threshold) {
  const auto n = static_cast<lapack_int>(m.rows());
  if (m.rows() != m.cols() || n < 1) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  Eigen::MatrixXcd a = m;
  Eigen::VectorXcd w(n);
  Eigen::MatrixXcd vr(n, n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, w.data(), nullptr, 1,
                                        vr.data(), n);
  if (info != 0) {
    throw Error(ErrorKind::NoConvergence, "zgeev failed with info " + std::to_string(info));
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(vr);
  const double rcond = lu.rcond();
  if (!(rcond * cond_threshold > 1.0)) {
    throw Error(ErrorKind::IllConditioned, "eigenvector matrix condition estimate exceeds threshold");
  }
  const Eigen::MatrixXcd left = lu.inverse();
  SpectralSample out;
  out.n = static_cast<std::size_t>(n);
  out.eigenvalues.assign(w.data(), w.data() + n);
  out.overlaps.resize(out.n);
  for (lapack_int i = 0; i < n; ++i) out.overlaps[i] = vr.col(i).squaredNorm() * left.row(i).squaredNorm();
  return out;
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  const auto n = static_cast<lapack_int>(m.rows());
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  Eigen::MatrixXcd a = m;
  std::vector<double> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
  if (info != 0) throw Error(ErrorKind::NoConvergence, "zheev failed with info " + std::to_string(info));
  return w;
}

SampleBatch generate_samples(const McConfig& config) {
  if (config.samples == 0) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  if (config.spec.variant == EnsembleVariant::CommutatorGinibre) {
    throw Error(ErrorKind::UnsupportedVariant, "the commutator is Hermitian; use hermitian_spectrum_check");
  }
  const std::size_t count = config.samples;
  std::vector<SpectralSample> slots(count);
  std::vector<char> dropped(count, 0);

  auto draw = [&](std::size_t i) {
    const SeedRecord seed{config.seed, i};
    auto rng = sample_rng(seed);
    const Eigen::MatrixXcd m = sample_matrix(config.spec, config.n, rng);
    SpectralSample s;
    if (config.overlaps) {
      try {
        s = eigen_overlaps(m);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::IllConditioned) throw;
        dropped[i] = 1;
        return;
      }
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
      s.n = config.n;
      s.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + config.n);
    }
    s.ensemble = config.spec;
    s.seed = seed;
    slots[i] = std::move(s);
  };

  const auto total = static_cast<std::ptrdiff_t>(count);
  if (config.policy.mode == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < total; ++i) draw(static_cast<std::size_t>(i));
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(resolved_threads(config.policy))
    for (std::ptrdiff_t i = 0; i < total; ++i) {
      try {
        draw(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  SampleBatch batch;
  for (std::size_t i = 0; i < count; ++i) {
    if (dropped[i]) {
      batch.discarded.push_back(i);
    } else {
      batch.samples.push_back(std::move(slots[i]));
    }
  }
  return batch;
}

std::vector<double> uniform_edges(double r_max, std::size_t bins) {
  if (!(r_max > 0.0) || bins == 0) throw Error(ErrorKind::InvalidArgument, "bad radial binning");
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = r_max * static_cast<double>(i) / static_cast<double>(bins);
  return edges;
}

EmpiricalProfile empirical_radial_cdf(const std::vector<SpectralSample>& samples, const std::vector<double>& edges) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "no samples to profile");
  if (edges.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least one bin");
  EmpiricalProfile prof;
  prof.bin_edges = edges;
  prof.sample_count = samples.size();
  prof.n = samples.front().n;
  for (const auto& s : samples) {
    for (cplx z : s.eigenvalues) prof.moduli.push_back(std::abs(z));
  }
  std::sort(prof.moduli.begin(), prof.moduli.end());
  const double total = static_cast<double>(prof.moduli.size());
  prof.F_hat.resize(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto below = std::upper_bound(prof.moduli.begin(), prof.moduli.end(), edges[i]) - prof.moduli.begin();
    prof.F_hat[i] = static_cast<double>(below) / total;
  }
  const std::size_t bins = edges.size() - 1;
  prof.bin_counts.assign(bins, 0);
  for (double r : prof.moduli) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), r);
    if (it == edges.begin() || it == edges.end()) continue;
    ++prof.bin_counts[static_cast<std::size_t>(it - edges.begin()) - 1];
  }
  for (std::size_t b = 0; b < bins; ++b) {
    if (prof.bin_counts[b] == 0) prof.empty_bins.push_back(b);
  }
  return prof;
}

EmpiricalProfile empirical_overlap_density(const std::vector<SpectralSample>& samples,
                                           const std::vector<double>& edges) {
  EmpiricalProfile prof = empirical_radial_cdf(samples, edges);
  const std::size_t bins = edges.size() - 1;
  std::vector<double> sums(bins, 0.0);
  for (const auto& s : samples) {
    if (s.overlaps.size() != s.eigenvalues.size()) {
      throw Error(ErrorKind::InvalidArgument, "sample carries no overlaps");
    }
    for (std::size_t a = 0; a < s.eigenvalues.size(); ++a) {
      const double r = std::abs(s.eigenvalues[a]);
      const auto it = std::upper_bound(edges.begin(), edges.end(), r);
      if (it == edges.begin() || it == edges.end()) continue;
      sums[static_cast<std::size_t>(it - edges.begin()) - 1] += s.overlaps[a];
    }
  }
  const double n = static_cast<double>(prof.n);
  const double norm = static_cast<double>(prof.sample_count) * n * n;
  prof.O_hat.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double area = kPi * (edges[b + 1] * edges[b + 1] - edges[b] * edges[b]);
    prof.O_hat[b] = sums[b] / (norm * area);
  }
  return prof;
}

RadiiEstimate estimate_radii(const EmpiricalProfile& empirical, double zero_mode_fraction) {
  const auto& r = empirical.moduli;
  if (r.empty()) throw Error(ErrorKind::InvalidArgument, "no eigenvalues");
  RadiiEstimate est;
  if (r.back() - r.front() <= 1e-8 * r.back()) {
    est.degenerate = true;
    est.inner = est.outer = median(r);
    return est;
  }
  const double total = static_cast<double>(r.size());
  auto window = [&](double f_lo, double f_hi, double f_target) {
    std::vector<double> f;
    std::vector<double> s2;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double fi = (static_cast<double>(i) + 0.5) / total;
      if (fi >= f_lo && fi <= f_hi) {
        f.push_back(fi);
        s2.push_back(r[i] * r[i]);
      }
    }
    if (f.size() < 3) throw Error(ErrorKind::InvalidArgument, "too few eigenvalues for the radius fit");
    return std::max(0.0, quadratic_extrapolate(f, s2, f_target));
  };
  est.outer = std::sqrt(window(0.75, 0.9, 1.0));
  const double z = zero_mode_fraction;
  est.inner = std::sqrt(window(z + (1.0 - z) * 0.1, z + (1.0 - z) * 0.25, z));
  return est;
}

double ks_statistic(const std::vector<double>& sorted_moduli, const std::function<double(double)>& cdf) {
  const double total = static_cast<double>(sorted_moduli.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted_moduli.size(); ++i) {
    const double f = cdf(sorted_moduli[i]);
    worst = std::max({worst, std::abs(static_cast<double>(i + 1) / total - f),
                      std::abs(static_cast<double>(i) / total - f)});
  }
  return worst;
}

double annulus_average(const std::function<double(double)>& f, double lo, double hi) {
  // Composite Simpson on f(s) s over [lo, hi].
  constexpr int kPanels = 16;
  const double h = (hi - lo) / kPanels;
  double acc = 0.0;
  for (int i = 0; i <= kPanels; ++i) {
    const double s = lo + h * i;
    const double weight = (i == 0 || i == kPanels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += weight * f(s) * s;
  }
  const double integral = acc * h / 3.0;
  return integral / (0.5 * (hi * hi - lo * lo));
}

ComparisonReport compare(const RadialProfile& analytic, const EmpiricalProfile& empirical, const Tolerances& tol) {
  ComparisonReport rep;
  rep.tolerances = tol;
  rep.radii_analytic = analytic.radii;
  rep.ks_statistic = ks_statistic(empirical.moduli, [&](double s) { return analytic.F_at(s); });
  rep.pass_ks = rep.ks_statistic <= tol.ks;

  rep.radii_empirical = estimate_radii(empirical, analytic.zero_mode_fraction);
  rep.inner_radius_error = std::abs(rep.radii_empirical.inner - analytic.radii.inner);
  rep.outer_radius_error = std::abs(rep.radii_empirical.outer - analytic.radii.outer);
  rep.pass_radii = rep.inner_radius_error <= tol.radius && rep.outer_radius_error <= tol.radius;

  if (!empirical.O_hat.empty() && !analytic.radii.degenerate) {
    rep.overlap_checked = true;
    const auto& e = empirical.bin_edges;
    std::vector<std::size_t> inside;
    for (std::size_t b = 0; b + 1 < e.size(); ++b) {
      if (e[b] >= analytic.radii.inner && e[b + 1] <= analytic.radii.outer) inside.push_back(b);
    }
    if (inside.size() > 2 * tol.edge_margin) {
      rep.overlap_bins.assign(inside.begin() + static_cast<std::ptrdiff_t>(tol.edge_margin),
                              inside.end() - static_cast<std::ptrdiff_t>(tol.edge_margin));
    }
    auto o_at = [&](double s) { return s <= 0.0 ? 0.0 : analytic.O_at(s); };
    for (std::size_t b : rep.overlap_bins) {
      const double expect = annulus_average(o_at, e[b], e[b + 1]);
      const double err = std::abs(empirical.O_hat[b] - expect) / expect;
      rep.overlap_sup_error = std::max(rep.overlap_sup_error, err);
    }
    rep.pass_overlap = !rep.overlap_bins.empty() && rep.overlap_sup_error <= tol.overlap;
  }
  return rep;
}

AnalyticFunction hermitian_r_function(const HermitianConfig& config) {
  if (config.object == HermitianObject::Commutator) {
    return commutator_r_function(config.spec, config.convention);
  }
  // R_{X + X^dagger}(z) = 2 z A(z^2).
  if (config.spec.variant == EnsembleVariant::GinibreProduct && config.spec.k > 1) {
    throw Error(ErrorKind::UnsupportedVariant, "no complex closed form of A for products");
  }
  const AnalyticFunction a = determining_function(config.spec);
  return {[a](cplx z) { return 2.0 * z * a(z * z); },
          [a](cplx z) { return 2.0 * a(z * z) + 4.0 * z * z * a.deriv(z * z); }};
}

HermitianReport hermitian_spectrum_check(const HermitianConfig& config) {
  if (config.n < 64) throw Error(ErrorKind::InvalidArgument, "Hermitian check needs N >= 64");
  if (config.samples == 0) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  const bool commutator = config.object == HermitianObject::Commutator;
  if (commutator != (config.spec.variant == EnsembleVariant::CommutatorGinibre)) {
    throw Error(ErrorKind::UnsupportedVariant, "object and ensemble do not match");
  }
  EnsembleSpec draw_spec = config.spec;
  if (commutator) draw_spec.v = commutator_variance(config.spec, config.convention);

  std::vector<std::vector<double>> spectra(config.samples);
  auto draw = [&](std::size_t i) {
    auto rng = sample_rng({config.seed, i});
    Eigen::MatrixXcd m = sample_matrix(draw_spec, config.n, rng);
    if (!commutator) m = (m + m.adjoint()).eval();
    spectra[i] = hermitian_eigenvalues(m);
  };
  const auto total = static_cast<std::ptrdiff_t>(config.samples);
  if (config.policy.mode == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < total; ++i) draw(static_cast<std::size_t>(i));
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(resolved_threads(config.policy))
    for (std::ptrdiff_t i = 0; i < total; ++i) {
      try {
        draw(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  HermitianReport rep;
  std::vector<double> pooled;
  for (const auto& s : spectra) pooled.insert(pooled.end(), s.begin(), s.end());
  const double count = static_cast<double>(pooled.size());
  double m2 = 0.0;
  double m4 = 0.0;
  double extent = 0.0;
  for (double x : pooled) {
    m2 += x * x;
    m4 += x * x * x * x;
    extent = std::max(extent, std::abs(x));
  }
  rep.m2 = m2 / count;
  rep.m4 = m4 / count;
  rep.kurtosis = rep.m4 / (rep.m2 * rep.m2);

  // Predicted moments from the first four free cumulants.
  TransformSeries r_pred = commutator
                               ? commutator_reference(config.spec, 3, config.convention)
                               : hermitian_part_r(determining_sequence(config.spec, 2));
  const auto kappa = cumulants_of(r_pred).kappa;
  const auto moments = moments_from_cumulants({std::vector<double>(kappa.begin(), kappa.begin() + 4)}).m;
  rep.predicted_m2 = moments[1];
  rep.predicted_m4 = moments[3];
  if (commutator) {
    // Alternative form z/(1 - z^2): kappa_2 = kappa_4 = 1 gives m4/m2^2 = 3.
    const auto alternative = moments_from_cumulants({{0.0, 1.0, 0.0, 1.0}}).m;
    rep.kurtosis_alternative = alternative[3] / (alternative[1] * alternative[1]);
    rep.kurtosis_derived = rep.predicted_m4 / (rep.predicted_m2 * rep.predicted_m2);
    const bool derived_wins =
        std::abs(rep.kurtosis - rep.kurtosis_derived) < std::abs(rep.kurtosis - rep.kurtosis_alternative);
    rep.convention_note =
        std::string("variance v=") + std::to_string(draw_spec.v) + " per unit of 1/N; predicted R_C = 2v^2 z/(1 - v^2 z^2). " +
        "Measured m4/m2^2 = " + std::to_string(rep.kurtosis) + " vs " + std::to_string(rep.kurtosis_derived) +
        " for 2z/(1 - z^2) and " + std::to_string(rep.kurtosis_alternative) + " for z/(1 - z^2): " +
        (derived_wins ? "the doubled form is the one realized; z/(1 - z^2) is not a rescaling of it."
                      : "the alternative form fits better.");
  }
  rep.pass_moment = std::abs(rep.m2 - rep.predicted_m2) <= config.moment_tol;

  const double lim = extent * 1.02;
  const std::size_t bins = config.bins;
  rep.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) rep.bin_edges[b] = -lim + 2.0 * lim * static_cast<double>(b) / static_cast<double>(bins);
  const double width = 2.0 * lim / static_cast<double>(bins);
  rep.histogram.assign(bins, 0.0);
  for (double x : pooled) {
    auto b = static_cast<std::size_t>((x + lim) / width);
    rep.histogram[std::min(b, bins - 1)] += 1.0;
  }
  for (double& h : rep.histogram) h /= count * width;

  const AnalyticFunction r = hermitian_r_function(config);
  rep.predicted.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    // Bin average by Simpson's rule on five nodes.
    double acc = 0.0;
    const double weights[] = {1, 4, 2, 4, 1};
    for (int j = 0; j < 5; ++j) {
      const double x = rep.bin_edges[b] + width * j / 4.0;
      acc += weights[j] * stieltjes_density(r, x, {1e-6, true});
    }
    rep.predicted[b] = std::max(0.0, acc / 12.0);
  }
  const double peak = *std::max_element(rep.predicted.begin(), rep.predicted.end());
  rep.bulk.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    rep.bulk[b] = rep.predicted[b] >= config.bulk_fraction * peak;
    if (rep.bulk[b]) {
      rep.density_sup_error = std::max(rep.density_sup_error, std::abs(rep.histogram[b] - rep.predicted[b]));
    }
  }
  rep.pass_density = rep.density_sup_error <= config.density_tol;
  return rep;
}

}  // namespace ringlab
