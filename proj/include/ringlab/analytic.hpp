#pragma once

#include <functional>
#include <limits>

#include "ringlab/series.hpp"

namespace ringlab {

/// Complex-in/complex-out closure for transforms known in closed form.
///
/// `radius` is the caller-declared analyticity radius around 0; evaluating at
/// |x| > radius raises ErrorKind::EvaluationDomain. When `derivative` is
/// empty a central difference is used.
struct AnalyticFunction {
  std::function<cplx(cplx)> value;
  std::function<cplx(cplx)> derivative;
  double radius = std::numeric_limits<double>::infinity();

  cplx operator()(cplx x) const;
  cplx deriv(cplx x) const;

  static AnalyticFunction constant(cplx c);
  /// Polynomial evaluation of a truncated series; `radius` should be set to
  /// (a safe fraction of) the series' radius of convergence.
  static AnalyticFunction from_series(const TruncatedSeries& s,
                                      double radius = std::numeric_limits<double>::infinity());
};

}  // namespace ringlab
