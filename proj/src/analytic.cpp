#include "ringlab/analytic.hpp"

#include <cmath>
#include <sstream>

#include "ringlab/error.hpp"

namespace ringlab {
namespace {

void check_domain(cplx x, double radius) {
  if (std::abs(x) > radius) {
    std::ostringstream msg;
    msg << "argument " << x << " outside declared radius " << radius;
    throw Error(ErrorKind::EvaluationDomain, msg.str());
  }
}

}  // namespace

cplx AnalyticFunction::operator()(cplx x) const {
  check_domain(x, radius);
  return value(x);
}

cplx AnalyticFunction::deriv(cplx x) const {
  check_domain(x, radius);
  if (derivative) return derivative(x);
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (value(x + h) - value(x - h)) / (2.0 * h);
}

AnalyticFunction AnalyticFunction::constant(cplx c) {
  return {[c](cplx) { return c; }, [](cplx) { return cplx{}; }};
}

AnalyticFunction AnalyticFunction::from_series(const TruncatedSeries& s, double radius) {
  TruncatedSeries ds = ringlab::derivative(s);
  return {[s](cplx x) { return s.evaluate(x); }, [ds](cplx x) { return ds.evaluate(x); }, radius};
}

}  // namespace ringlab
