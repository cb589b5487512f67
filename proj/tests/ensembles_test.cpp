#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ringlab/ensembles.hpp"
#include "ringlab/error.hpp"
#include "test_support.hpp"

namespace ringlab {
namespace {

using testing::catalan;

TEST(DeterminingSequence, GinibreIsConstant) {
  const auto a = determining_sequence(EnsembleSpec::ginibre(), 8);
  EXPECT_TRUE(a.a.approx_equal(TruncatedSeries::constant(1.0, 7), 0.0));
  EXPECT_TRUE(determining_sequence(EnsembleSpec::ginibre(2.5), 3).a.approx_equal(TruncatedSeries{2.5, 0, 0}, 0.0));
}

TEST(DeterminingSequence, HaarAlternatingCatalan) {
  const auto a = determining_sequence(EnsembleSpec::haar(), 10);
  for (int n = 1; n <= 10; ++n) {
    EXPECT_LT(std::abs(a.alpha(n).real() - std::pow(-1.0, n - 1) * catalan(n - 1)), 1e-10);
  }
}

TEST(DeterminingSequence, ProductsMatchRaney) {
  for (int k = 2; k <= 4; ++k) {
    const auto a = determining_sequence(EnsembleSpec::ginibre_product(k), 8);
    for (unsigned n = 1; n <= 8; ++n) {
      EXPECT_NEAR(a.alpha(n).real(), static_cast<double>(raney(n - 1, k - 1, k - 1)), 1e-9) << k << " " << n;
      // The one-parameter form that matches is A_n(k-1, 1).
      EXPECT_EQ(raney(n - 1, k - 1, k - 1), raney(n, k - 1, 1));
    }
  }
  const auto a3 = determining_sequence(EnsembleSpec::ginibre_product(3), 6);
  const double expect[] = {1, 2, 5, 14, 42, 132};
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(a3.alpha(n).real(), expect[n - 1], 1e-10);
}

TEST(DeterminingSequence, CommutatorIsUnsupported) {
  try {
    determining_sequence(EnsembleSpec::commutator(), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedVariant);
  }
}

TEST(Raney, SmallValuesAndOverflow) {
  EXPECT_EQ(raney(0, 3, 2), 1u);
  EXPECT_EQ(raney(1, 1, 1), 1u);
  EXPECT_EQ(raney(2, 2, 2), 5u);
  EXPECT_EQ(raney(3, 2, 2), 14u);
  for (unsigned n = 0; n < 30; ++n) EXPECT_EQ(raney(n, 1, 1), 1u);
  // A_n(2, 1) are the Catalan numbers.
  for (unsigned n = 0; n <= 12; ++n) EXPECT_EQ(raney(n, 2, 1), static_cast<std::uint64_t>(catalan(n)));
  EXPECT_THROW(raney(200, 5, 5), Error);
}

TEST(Ensembles, SpecJsonRoundTrip) {
  for (const auto& spec : {EnsembleSpec::ginibre(0.5), EnsembleSpec::haar(), EnsembleSpec::ginibre_product(3),
                           EnsembleSpec::free_poisson(2.0), EnsembleSpec::commutator()}) {
    const nlohmann::json j = spec;
    const auto back = j.get<EnsembleSpec>();
    EXPECT_EQ(back.variant, spec.variant);
    EXPECT_EQ(back.name(), spec.name());
  }
  EXPECT_THROW(nlohmann::json::parse(R"({"variant":"wishart"})").get<EnsembleSpec>(), Error);
  EXPECT_THROW(nlohmann::json::parse(R"({"variant":"poisson","params":{"q":-1}})").get<EnsembleSpec>(), Error);
}

TEST(Ensembles, SeriesChainMatchesReferenceProfile) {
  // determining_sequence -> s_from_a must agree with the closed-form S, and
  // the radial solver with the closed-form profile.
  for (const auto& spec : {EnsembleSpec::ginibre(), EnsembleSpec::free_poisson(0.5), EnsembleSpec::free_poisson(2.0),
                           EnsembleSpec::ginibre_product(2), EnsembleSpec::ginibre_product(3)}) {
    const auto s_series = s_from_a(determining_sequence(spec, 16));
    const auto s_closed = s_transform_function(spec);
    for (double x : {-0.05, -0.02, 0.0, 0.03}) {
      EXPECT_NEAR(std::abs(s_series.series.evaluate(x) - s_closed(x)), 0.0, 1e-8) << spec.name();
    }
    const auto model = single_ring_model(spec);
    const double r_out = ring_radii(model).outer;
    for (int i = 1; i <= 50; ++i) {
      const double s = r_out * i / 51.0;
      const auto ref = reference_profile(spec, s);
      EXPECT_NEAR(radial_cdf(model, s), ref.F, 1e-8) << spec.name() << " s=" << s;
      EXPECT_NEAR(radial_density(model, s), ref.rho, 1e-8 * std::max(1.0, ref.rho)) << spec.name() << " s=" << s;
      EXPECT_NEAR(overlap_correlator(model, s), ref.O, 1e-8 * std::max(1.0, ref.O)) << spec.name() << " s=" << s;
    }
  }
}

TEST(Ensembles, ReferenceProfileExamples) {
  const auto g = reference_profile(EnsembleSpec::ginibre(), 0.5);
  EXPECT_DOUBLE_EQ(g.F, 0.25);
  EXPECT_DOUBLE_EQ(g.rho, 1 / std::numbers::pi);
  EXPECT_DOUBLE_EQ(g.O, 0.75 / std::numbers::pi);
  EXPECT_NEAR(reference_profile(EnsembleSpec::free_poisson(2.0), 1.0).F, (std::sqrt(5.0) - 1) / 2, 1e-15);
  const auto h = reference_profile(EnsembleSpec::haar(), 0.7);
  EXPECT_EQ(h.rho, 0.0);
  EXPECT_EQ(h.O, 0.0);
}

TEST(Ensembles, ProductSIsPowerOfGinibreS) {
  const auto s1 = s_from_a(determining_sequence(EnsembleSpec::ginibre(), 9));
  TransformSeries acc = s1;
  for (int k = 2; k <= 4; ++k) {
    acc = rdiagonal_multiply(acc, s1);
    const auto sk = s_from_a(determining_sequence(EnsembleSpec::ginibre_product(k), 9));
    EXPECT_TRUE(acc.series.approx_equal(sk.series, 1e-9)) << k;
  }
}

TEST(Ensembles, ClosedFormAMatchesSeries) {
  for (const auto& spec : {EnsembleSpec::haar(), EnsembleSpec::free_poisson(2.0), EnsembleSpec::ginibre_product(3)}) {
    const auto series = determining_sequence(spec, 40);
    const auto fn = determining_function(spec);
    for (double x : {-0.01, -0.05, -0.1}) {
      EXPECT_NEAR(std::abs(series.a.evaluate(x) - fn(x)), 0.0, 1e-9) << spec.name();
      const double h = 1e-6;
      EXPECT_NEAR(fn.deriv(x).real(), (fn(x + h) - fn(x - h)).real() / (2 * h), 1e-6) << spec.name();
    }
  }
}

TEST(Ensembles, RadiiFromCatalogueMatchFirstCumulant) {
  for (const auto& spec : {EnsembleSpec::ginibre(), EnsembleSpec::ginibre(3.0), EnsembleSpec::free_poisson(0.5),
                           EnsembleSpec::free_poisson(2.0), EnsembleSpec::ginibre_product(3), EnsembleSpec::haar()}) {
    const double alpha1 = determining_sequence(spec, 1).alpha(1).real();
    auto model = single_ring_model(spec);
    const RingRadii catalogue = ring_radii(model);
    EXPECT_NEAR(catalogue.outer * catalogue.outer, alpha1, 1e-12) << spec.name();
    model.moment1.reset();
    model.inv_moment1.reset();
    const RingRadii derived = ring_radii(model);
    EXPECT_NEAR(derived.outer, catalogue.outer, 1e-12) << spec.name();
    EXPECT_NEAR(derived.inner, catalogue.inner, 1e-12) << spec.name();
  }
}

TEST(Commutator, ConventionsAndClosedForm) {
  const auto rc = commutator_reference(EnsembleSpec::commutator(), 9);
  for (int n = 0; n <= 9; ++n) EXPECT_DOUBLE_EQ(rc.series[n].real(), n % 2 == 1 ? 2.0 : 0.0);
  const auto alt = commutator_reference(EnsembleSpec::commutator(), 5, CommutatorConvention::UnitSecondCumulant);
  EXPECT_NEAR(alt.series[1].real(), 1.0, 1e-15);  // matches z/(1 - z^2) at lowest order
  EXPECT_NEAR(alt.series[3].real(), 0.5, 1e-15);  // but not beyond
  const auto fn = commutator_r_function(EnsembleSpec::commutator());
  EXPECT_NEAR(std::abs(fn(0.3) - rc.series.evaluate(0.3)), 0.0, 1e-5);
}

}  // namespace
}  // namespace ringlab
