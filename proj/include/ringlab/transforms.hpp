#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "ringlab/analytic.hpp"
#include "ringlab/series.hpp"

namespace ringlab {

/// Generating functions of the Hermitian (G, M, R, B, S) and R-diagonal
/// (A, K) families. All kinds except G and B are stored as plain power series
/// around 0. G is stored in the variable u = 1/z, G(1/u) = u + m_1 u^2 + ...,
/// and B as z B(z) = 1 + z R(z).
enum class TransformKind { G, M, R, B, S, A, K };

const char* to_string(TransformKind kind) noexcept;
TransformKind transform_kind_from_string(std::string_view name);

struct TransformSeries {
  TransformKind kind;
  TruncatedSeries series;
};

/// Moments m_1..m_K of a Hermitian distribution (m[0] holds m_1).
struct MomentData {
  std::vector<double> m;
};

/// Free cumulants kappa_1..kappa_K (kappa[0] holds kappa_1).
struct CumulantData {
  std::vector<double> kappa;
};

/// Determining sequence of an R-diagonal operator stored as
/// A(z) = sum_k alpha_k z^(k-1).
struct DeterminingSequence {
  TruncatedSeries a;

  static DeterminingSequence from_alphas(std::span<const double> alphas);
  /// alpha_n, 1-based.
  cplx alpha(std::size_t n) const { return a.coeff(n - 1); }
  std::size_t length() const noexcept { return a.order() + 1; }
};

// --- Hermitian moments and cumulants -------------------------------------

/// M~(z) = sum_k m_k z^(k-1).
TransformSeries moment_series(const MomentData& moments);
/// u + m_1 u^2 + ... + m_K u^(K+1), the Green's function expanded at infinity.
TransformSeries green_series(const MomentData& moments);
TransformSeries r_series(const CumulantData& cumulants);
/// z B(z) = 1 + z R(z).
TransformSeries blue_series(const TransformSeries& r);
CumulantData cumulants_of(const TransformSeries& r);
MomentData moments_of(const TransformSeries& m);

/// Solves R[G(z)] + 1/G(z) = z as a series identity: the Blue's function is
/// the compositional inverse of the Green's function at infinity.
CumulantData cumulants_from_moments(const MomentData& moments);
MomentData moments_from_cumulants(const CumulantData& cumulants);

/// kappa_n by Moebius inversion over the explicitly enumerated lattice of
/// non-crossing partitions NC(n). Throws OrderTooLarge for n > 10.
double nc_cumulant_oracle(const MomentData& moments, int n);

/// Number of non-crossing partitions of {1..n}; exposed for tests.
std::size_t nc_partition_count(int n);

// --- S-transform -----------------------------------------------------------

/// R(z) S(z R(z)) = 1; z S(z) is the compositional inverse of z R(z).
/// Throws ZeroMean when kappa_1 vanishes.
TransformSeries r_to_s(const TransformSeries& r);
TransformSeries s_to_r(const TransformSeries& s);

// --- R-diagonal relations --------------------------------------------------

/// z K(z) is the compositional inverse of z A(z). Throws ZeroFirstCumulant.
TransformSeries a_to_k(const DeterminingSequence& a);
DeterminingSequence k_to_a(const TransformSeries& k);
/// S(t) = K(t) / (1 + t) and its inverse.
TransformSeries s_from_k(const TransformSeries& k);
TransformSeries k_from_s(const TransformSeries& s);

/// S(z A(z)) = 1 / (A(z) (1 + z A(z))): the S-transform of X X^dagger.
TransformSeries s_from_a(const DeterminingSequence& a);

/// Solves R(z / (1 + z A(z))) = (1 + z A(z)) A(z) for A, order by order.
/// Throws InconsistentInput unless kappa_1 > 0.
DeterminingSequence a_from_r(const TransformSeries& r);

/// Solves R(z) = z B(z) A(z^2 B(z)), B = R + 1/z, for R, order by order.
TransformSeries r_from_a(const DeterminingSequence& a);

/// Addition of free R-diagonal operators adds determining sequences.
DeterminingSequence rdiagonal_add(const DeterminingSequence& a1, const DeterminingSequence& a2);

/// Product of free R-diagonal operators multiplies the S-transforms of X X^dagger.
TransformSeries rdiagonal_multiply(const TransformSeries& s1, const TransformSeries& s2);

/// Free multiplicative convolution through R-transforms only:
/// R_AB(z) = R_A(x) R_B(y) with x = z R_B(y), y = z R_A(x).
TransformSeries hermitian_multiply(const TransformSeries& r1, const TransformSeries& r2);
/// Same product via S_AB = S_A S_B; needs both means non-zero.
TransformSeries hermitian_multiply_via_s(const TransformSeries& r1, const TransformSeries& r2);

/// R-transform of X + X^dagger: 2 z A(z^2).
TransformSeries hermitian_part_r(const DeterminingSequence& a);

/// R-transform of X X^dagger - X^dagger X given R of X X^dagger:
/// R(z) - R(-z).
TransformSeries commutator_r(const TransformSeries& r_p2);

// --- densities ---------------------------------------------------------------

struct StieltjesOptions {
  double epsilon = 1e-6;
  /// Combine epsilon and epsilon/2 to cancel the O(epsilon) smoothing bias.
  bool richardson = false;
};

/// Solves R(G) + 1/G = z on the Herglotz branch (Im G < 0 for Im z > 0),
/// continuing from far above the real axis down to z.
cplx solve_green(const AnalyticFunction& r, cplx z);

/// rho(x) = -Im G(x + i epsilon) / pi.
double stieltjes_density(const AnalyticFunction& r, double x, const StieltjesOptions& opts = {});
double stieltjes_density(const TransformSeries& r, double x, const StieltjesOptions& opts = {});

// --- helpers -------------------------------------------------------------------

/// g with z g(z) equal to the compositional inverse of z f(z).
TruncatedSeries tilde_inverse(const TruncatedSeries& f);

/// Solves residual(x) = 0 one coefficient at a time. [residual(x)]_n must be
/// affine in x_n with non-zero slope and independent of x_m for m > n.
TruncatedSeries solve_order_by_order(
    std::size_t order, const std::function<TruncatedSeries(const TruncatedSeries&)>& residual);

}  // namespace ringlab
