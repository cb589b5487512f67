#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ringlab/io.hpp"

namespace ringlab {

struct CheckResult {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  /// Truncation length of the random determining sequences.
  std::size_t order = 10;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  /// Coefficient-wise tolerance; 1e-9 up to length 10, 1e-8 beyond.
  std::optional<double> tolerance;
};

double default_verify_tolerance(std::size_t order);

/// Largest |x_n - y_n| / max(1, |y_n|) over the common coefficients.
double coefficient_error(const TruncatedSeries& x, const TruncatedSeries& y);

/// Transform-map identities, round trips, the non-crossing partition oracle
/// and the catalogue's closed-form coefficients.
std::vector<CheckResult> identity_checks(const VerifyOptions& options);

/// Round trips through every relation applicable to the document's kind.
std::vector<CheckResult> document_checks(const SeriesDocument& doc, double tolerance);

}  // namespace ringlab
