#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ringlab/analytic.hpp"
#include "ringlab/parallel.hpp"

namespace ringlab {

/// Input to the radial solver: the S-transform of X X^dagger plus the
/// boundary data of the radial CDF.
struct SingleRingModel {
  /// S on the real segment (zero_mode_fraction - 1, 0].
  AnalyticFunction s;
  /// Mass of the eigenvalue distribution at the origin.
  double zero_mode_fraction = 0.0;
  /// First moment of X X^dagger; derived as 1/S(0) when absent.
  std::optional<double> moment1;
  /// First inverse moment of X X^dagger (infinity allowed); derived from
  /// S(zero_mode_fraction - 1) when absent.
  std::optional<double> inv_moment1;
  std::string label;
};

struct RingRadii {
  double inner = 0.0;
  double outer = 0.0;
  /// inner == outer: all mass sits on one circle.
  bool degenerate = false;
};

RingRadii ring_radii(const SingleRingModel& model);

struct RadialPoint {
  double F = 0.0;
  /// More than one root of S(F - 1) = 1/s^2 was bracketed; the one closest
  /// to F = 1 (continuous from the outer edge) is returned.
  bool multiple_roots = false;
};

/// Solves S(F - 1) = 1/s^2 for F, clamped to the boundary values outside
/// the ring. Throws NoRoot when the equation has no solution inside.
RadialPoint radial_solve(const SingleRingModel& model, double s);
double radial_cdf(const SingleRingModel& model, double s);

/// Eigenvalue density per unit area, F'(s) / (2 pi s) with
/// F'(s) = -2 / (s^3 S'(F - 1)); zero outside the open ring.
/// Throws EdgeSingularity when |S'| vanishes.
double radial_density(const SingleRingModel& model, double s);

/// O(s) = F (1 - F) / (pi s^2).
double overlap_correlator(const SingleRingModel& model, double s);

struct GridSpec {
  std::size_t points = 512;
  /// The grid covers [0, r_out (1 + margin)] with cell-centred nodes.
  double margin = 0.1;
};

struct RadialProfile {
  std::vector<double> s_grid;
  std::vector<double> F;
  std::vector<double> rho;
  std::vector<double> O;
  RingRadii radii;
  /// 2 pi int rho s ds over the open ring (1 - zero_mode_fraction for a
  /// consistent model; the whole mass for a degenerate ring).
  double normalization = 0.0;
  bool multiple_roots = false;
  double zero_mode_fraction = 0.0;
  std::string label;

  /// Linear interpolation of F and O, clamped to the ends of the grid.
  double F_at(double s) const;
  double O_at(double s) const;
};

RadialProfile build_profile(const SingleRingModel& model, const GridSpec& grid = {},
                            const ExecPolicy& policy = ExecPolicy::parallel());

}  // namespace ringlab
