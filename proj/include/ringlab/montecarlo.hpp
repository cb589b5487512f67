#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ringlab/ensembles.hpp"
#include "ringlab/parallel.hpp"
#include "ringlab/single_ring.hpp"

namespace ringlab {

struct SeedRecord {
  std::uint64_t master = 0;
  std::uint64_t index = 0;
};

/// Independent stream for sample `index` of a run seeded with `master`.
std::mt19937_64 sample_rng(const SeedRecord& seed);

struct SpectralSample {
  std::size_t n = 0;
  std::vector<cplx> eigenvalues;
  /// O_aa = <L_a|L_a><R_a|R_a>; empty for Hermitian runs.
  std::vector<double> overlaps;
  EnsembleSpec ensemble;
  SeedRecord seed;
};

/// Draws one N x N matrix. CommutatorGinibre yields X X^dagger - X^dagger X.
Eigen::MatrixXcd sample_matrix(const EnsembleSpec& spec, std::size_t n, std::mt19937_64& rng);

inline constexpr double kConditionThreshold = 1e12;

/// Eigenvalues and diagonal overlaps from a general complex eigendecomposition.
/// Left eigenvectors are the rows of the inverse right-eigenvector matrix.
/// Throws IllConditioned when the reciprocal condition estimate of that
/// matrix is below 1/cond_threshold.
SpectralSample eigen_overlaps(const Eigen::MatrixXcd& m, double cond_threshold = kConditionThreshold);

/// Eigenvalues of a Hermitian matrix in ascending order.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m);

struct McConfig {
  EnsembleSpec spec;
  std::size_t n = 1024;
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  bool overlaps = true;
  ExecPolicy policy = ExecPolicy::parallel();
};

struct SampleBatch {
  std::vector<SpectralSample> samples;
  /// Indices of samples dropped as ill-conditioned.
  std::vector<std::uint64_t> discarded;
};

/// Samples are independent; sample i always uses stream (seed, i), so the
/// batch is identical for every execution policy.
SampleBatch generate_samples(const McConfig& config);

/// `bins` equal-width radial edges over [0, r_max].
std::vector<double> uniform_edges(double r_max, std::size_t bins = 64);

struct EmpiricalProfile {
  std::vector<double> bin_edges;
  /// Fraction of eigenvalues with |lambda| <= edge.
  std::vector<double> F_hat;
  /// Per-bin sum of O_aa / (sample_count N^2 area); empty without overlaps.
  std::vector<double> O_hat;
  std::vector<std::size_t> bin_counts;
  /// Bins that received no eigenvalue (their O_hat is 0 and not meaningful).
  std::vector<std::size_t> empty_bins;
  /// Sorted pooled moduli, kept for the exact KS statistic.
  std::vector<double> moduli;
  std::size_t sample_count = 0;
  std::size_t n = 0;
};

EmpiricalProfile empirical_radial_cdf(const std::vector<SpectralSample>& samples, const std::vector<double>& edges);
/// Same as empirical_radial_cdf plus the overlap density estimator.
EmpiricalProfile empirical_overlap_density(const std::vector<SpectralSample>& samples,
                                           const std::vector<double>& edges);

struct RadiiEstimate {
  double inner = 0.0;
  double outer = 0.0;
  bool degenerate = false;
};

/// Radii from the empirical CDF: s^2 is fitted as a quadratic in F on
/// F in [0.75, 0.9] and extrapolated to F = 1 (outer), and on
/// zmf + (1 - zmf) [0.1, 0.25] extrapolated to F = zmf (inner). When all
/// moduli coincide to 1e-8 both radii are their median.
RadiiEstimate estimate_radii(const EmpiricalProfile& empirical, double zero_mode_fraction = 0.0);

struct Tolerances {
  double ks = 0.02;
  double overlap = 0.10;
  std::size_t edge_margin = 2;
  /// Absolute tolerance on both radii.
  double radius = 0.02;
};

struct ComparisonReport {
  double ks_statistic = 0.0;
  double overlap_sup_error = 0.0;
  /// Bins entering the overlap comparison.
  std::vector<std::size_t> overlap_bins;
  RadiiEstimate radii_empirical;
  RingRadii radii_analytic;
  double inner_radius_error = 0.0;
  double outer_radius_error = 0.0;
  Tolerances tolerances;
  bool pass_ks = false;
  bool pass_overlap = false;
  bool pass_radii = false;
  bool overlap_checked = false;

  bool all_pass() const { return pass_ks && pass_radii && (!overlap_checked || pass_overlap); }
};

/// KS distance between the pooled empirical CDF and an analytic F.
double ks_statistic(const std::vector<double>& sorted_moduli, const std::function<double(double)>& cdf);

/// Mean of O over an annulus, weighted by area.
double annulus_average(const std::function<double(double)>& f, double lo, double hi);

/// Compares against the analytic profile. The overlap comparison runs on bins
/// lying inside [r_in, r_out] minus `edge_margin` bins at each end, against
/// the area-averaged analytic O of each bin.
ComparisonReport compare(const RadialProfile& analytic, const EmpiricalProfile& empirical, const Tolerances& tol);

enum class HermitianObject {
  /// X X^dagger - X^dagger X for the commutator spec.
  Commutator,
  /// X + X^dagger for an R-diagonal spec.
  HermitianPart,
};

struct HermitianConfig {
  EnsembleSpec spec = EnsembleSpec::commutator();
  HermitianObject object = HermitianObject::Commutator;
  CommutatorConvention convention = CommutatorConvention::Spec;
  std::size_t n = 1024;
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  std::size_t bins = 48;
  /// Bulk = bins where the predicted density exceeds this fraction of its peak.
  double bulk_fraction = 0.1;
  double moment_tol = 0.05;
  double density_tol = 0.05;
  ExecPolicy policy = ExecPolicy::parallel();
};

struct HermitianReport {
  double m2 = 0.0;
  double m4 = 0.0;
  double predicted_m2 = 0.0;
  double predicted_m4 = 0.0;
  double density_sup_error = 0.0;
  std::vector<double> bin_edges;
  std::vector<double> histogram;
  std::vector<double> predicted;
  std::vector<char> bulk;
  /// Kurtosis m4/m2^2 of the measured spectrum against the two candidate
  /// normalizations of the commutator law.
  double kurtosis = 0.0;
  double kurtosis_derived = 0.0;
  double kurtosis_alternative = 0.0;
  std::string convention_note;
  bool pass_moment = false;
  bool pass_density = false;

  bool all_pass() const { return pass_moment && pass_density; }
};

/// Predicted R-transform of the Hermitian object as a closed form.
AnalyticFunction hermitian_r_function(const HermitianConfig& config);

HermitianReport hermitian_spectrum_check(const HermitianConfig& config);

}  // namespace ringlab
