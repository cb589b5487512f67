#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "ringlab/analytic.hpp"
#include "ringlab/single_ring.hpp"
#include "ringlab/transforms.hpp"

namespace ringlab {

enum class EnsembleVariant { Ginibre, HaarUnitary, GinibreProduct, FreePoissonNH, CommutatorGinibre };

/// Catalogue entry. Ginibre entries have variance v/N, so (1/N) Tr X X^dagger
/// tends to v. The free Poisson matrix is X Y^dagger / N with X, Y of size
/// N x T, T = round(q N), unit-variance entries.
struct EnsembleSpec {
  EnsembleVariant variant = EnsembleVariant::Ginibre;
  double v = 1.0;
  int k = 1;
  double q = 1.0;

  static EnsembleSpec ginibre(double v = 1.0);
  static EnsembleSpec haar();
  static EnsembleSpec ginibre_product(int k);
  static EnsembleSpec free_poisson(double q);
  static EnsembleSpec commutator(double v = 1.0);

  /// Throws InvalidArgument on out-of-range parameters.
  void validate() const;
  std::string name() const;
};

const char* to_string(EnsembleVariant variant) noexcept;
EnsembleVariant ensemble_variant_from_string(const std::string& name);

void to_json(nlohmann::json& j, const EnsembleSpec& spec);
void from_json(const nlohmann::json& j, EnsembleSpec& spec);

/// alpha_1..alpha_length solving the ensemble's algebraic equation for A.
DeterminingSequence determining_sequence(const EnsembleSpec& spec, std::size_t length);

/// Closed-form A(x); GinibreProduct(k > 1) supports real x <= 0 only.
AnalyticFunction determining_function(const EnsembleSpec& spec);

/// Closed-form S-transform of X X^dagger.
AnalyticFunction s_transform_function(const EnsembleSpec& spec);

/// Model for the radial solver, with the catalogue's boundary data.
SingleRingModel single_ring_model(const EnsembleSpec& spec);

/// Raney number r/(np + r) binom(np + r, n) in exact integer arithmetic.
/// Throws Overflow when the value does not fit in 64 bits.
std::uint64_t raney(unsigned n, unsigned p, unsigned r);

struct ReferencePoint {
  double F = 0.0;
  double rho = 0.0;
  double O = 0.0;
};

/// Closed-form F, rho and O, written independently of the radial solver.
ReferencePoint reference_profile(const EnsembleSpec& spec, double s);

/// Variance conventions for the commutator X X^dagger - X^dagger X.
enum class CommutatorConvention {
  /// Use the ensemble's variance v (v = 1: unit trace of X X^dagger).
  Spec,
  /// v = 1/sqrt(2): second cumulant 1, the normalization implied by the
  /// alternative form z/(1 - z^2) at lowest order.
  UnitSecondCumulant,
};

double commutator_variance(const EnsembleSpec& spec, CommutatorConvention convention);

/// R_C = R_{P^2}(z) - R_{P^2}(-z) with R_{P^2}(z) = v/(1 - v z), as a series.
TransformSeries commutator_reference(const EnsembleSpec& spec, std::size_t order,
                                     CommutatorConvention convention = CommutatorConvention::Spec);

/// Closed form 2 v^2 z / (1 - v^2 z^2) of the same R-transform.
AnalyticFunction commutator_r_function(const EnsembleSpec& spec,
                                       CommutatorConvention convention = CommutatorConvention::Spec);

}  // namespace ringlab
