#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ringlab/analytic.hpp"
#include "ringlab/parallel.hpp"
#include "ringlab/transforms.hpp"

namespace ringlab {

/// Q(z, w) = [[z, i conj(w)], [i w, conj(z)]].
struct QuaternionPoint {
  cplx z;
  cplx w;

  Eigen::Matrix2cd matrix() const;
};

/// Generalized Green's function. Only g11 and g1w are stored; the other two
/// components follow from the quaternion structure.
struct QGreenValue {
  cplx g11;
  cplx g1w;

  cplx g1bar1bar() const { return std::conj(g11); }
  cplx gw1() const { return -std::conj(g1w); }
  Eigen::Matrix2cd matrix() const;
  /// -g1w gw1 = |g1w|^2, equal to pi O(z) in the small-w limit.
  double overlap_weight() const { return std::norm(g1w); }
  bool trivial() const { return g1w == cplx{}; }
};

/// R(Q) = A(q12 q21) [[0, q12], [q21, 0]] for a biunitarily invariant ensemble.
Eigen::Matrix2cd quaternionic_r(const AnalyticFunction& a, const Eigen::Matrix2cd& q);
Eigen::Matrix2cd quaternionic_r(const DeterminingSequence& a, const Eigen::Matrix2cd& q);

enum class SdBranch {
  /// The solution connected to the resolvent: for w != 0 the unique root with
  /// positive spectral weight; at w = 0 ambiguous wherever both branches exist.
  Physical,
  /// g11 = 1/z, g1w = 0 (only meaningful at w = 0).
  Trivial,
  /// g1w != 0 (only meaningful at w = 0).
  Nontrivial,
};

struct SdOptions {
  SdBranch branch = SdBranch::Physical;
  /// Max-norm bound on the residual R(G) + G^-1 - Q.
  double residual_tol = 1e-10;
};

/// Solves R(G) + G^-1 = Q(z, w). The quaternion symmetry reduces the problem
/// to one real unknown D = |g11|^2 + |g1w|^2 with g11 = conj(z) D and
/// |g1w|^2 = D - |z|^2 D^2, found by bracketed root finding plus Newton.
/// Throws NoValidBranch, AmbiguousBranch or NoConvergence.
QGreenValue solve_sd(const AnalyticFunction& a, cplx z, cplx w, const SdOptions& opts = {});

/// Richardson extrapolation w -> 0 from solutions at w and w/2; the leading
/// correction is linear in |w|.
QGreenValue solve_sd_limit(const AnalyticFunction& a, cplx z, cplx w);

/// Physical-branch solutions at z = s e^{i theta} for every s in `radii`.
std::vector<QGreenValue> sweep_radial(const AnalyticFunction& a, const std::vector<double>& radii,
                                      cplx w, double theta = 0.0,
                                      const ExecPolicy& policy = ExecPolicy::parallel());

}  // namespace ringlab
