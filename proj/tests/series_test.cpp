#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ringlab/error.hpp"
#include "ringlab/series.hpp"
#include "test_support.hpp"

namespace ringlab {
namespace {

using testing::lagrange_inverse;
using testing::make_rng;
using testing::max_abs_diff;
using testing::naive_product;
using testing::random_series;
using testing::to_vector;

TEST(Series, ReciprocalAgainstLongMultiplication) {
  auto rng = make_rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    TruncatedSeries f = random_series(rng, 12);
    f.set(0, 1.0);
    const auto prod = naive_product(to_vector(f), to_vector(reciprocal(f)), 12);
    std::vector<cplx> one(13);
    one[0] = 1.0;
    EXPECT_LT(max_abs_diff(prod, one), 1e-10);
  }
}

TEST(Series, ProductMatchesSchoolbookAndTruncatesToMinOrder) {
  auto rng = make_rng(12);
  const TruncatedSeries f = random_series(rng, 9);
  const TruncatedSeries g = random_series(rng, 6);
  const TruncatedSeries fg = f * g;
  EXPECT_EQ(fg.order(), 6u);
  EXPECT_LT(max_abs_diff(to_vector(fg), naive_product(to_vector(f), to_vector(g), 6)), 1e-14);
}

TEST(Series, RingAxiomsHoldToTruncation) {
  auto rng = make_rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_series(rng, 10);
    const auto g = random_series(rng, 10);
    const auto h = random_series(rng, 10);
    EXPECT_TRUE((f * g).approx_equal(g * f, 1e-13));
    EXPECT_TRUE(((f * g) * h).approx_equal(f * (g * h), 1e-12));
    EXPECT_TRUE((f * (g + h)).approx_equal(f * g + f * h, 1e-12));
    EXPECT_TRUE(((f + g) - g).approx_equal(f, 1e-14));
  }
}

TEST(Series, ComposeAgainstPowerSum) {
  auto rng = make_rng(14);
  const TruncatedSeries f = random_series(rng, 8);
  TruncatedSeries g = random_series(rng, 8);
  g.set(0, 0.0);
  std::vector<cplx> expect(9);
  std::vector<cplx> gk{1.0};
  for (std::size_t k = 0; k <= 8; ++k) {
    for (std::size_t n = 0; n < gk.size(); ++n) expect[n] += f[k] * gk[n];
    gk = naive_product(gk, to_vector(g), 8);
  }
  EXPECT_LT(max_abs_diff(to_vector(compose(f, g)), expect), 1e-12);
}

TEST(Series, ComposeKnownClosedForm) {
  // 1/(1-z) composed with z/(1+z) is 1 + z.
  TruncatedSeries geom(std::size_t{6});
  for (std::size_t k = 0; k <= 6; ++k) geom.set(k, 1.0);
  TruncatedSeries inner(std::size_t{6});
  for (std::size_t k = 1; k <= 6; ++k) inner.set(k, (k % 2 == 1) ? 1.0 : -1.0);
  EXPECT_TRUE(compose(geom, inner).approx_equal(TruncatedSeries{1.0, 1.0, 0, 0, 0, 0, 0}, 1e-14));
}

TEST(Series, InverseAgreesWithLagrangeInversion) {
  auto rng = make_rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    TruncatedSeries f = random_series(rng, 12);
    f.set(0, 0.0);
    f.set(1, f[1] + 2.0);  // keep f'(0) away from 0
    const TruncatedSeries h = compositional_inverse(f);
    EXPECT_LT(max_abs_diff(to_vector(h), lagrange_inverse(to_vector(f))), 1e-10);
    const auto z = TruncatedSeries::identity(12);
    EXPECT_TRUE(compose(f, h).approx_equal(z, 1e-10));
    EXPECT_TRUE(compose(h, f).approx_equal(z, 1e-10));
  }
}

TEST(Series, InverseOfCatalanGeneratingMap) {
  // z - z^2 inverts to sum_n C_{n-1} z^n.
  const TruncatedSeries f{0.0, 1.0, -1.0, 0, 0, 0, 0, 0, 0};
  const TruncatedSeries h = compositional_inverse(f);
  for (int n = 1; n <= 8; ++n) EXPECT_NEAR(h[n].real(), testing::catalan(n - 1), 1e-12);
}

TEST(Series, DerivativeAndShifts) {
  const TruncatedSeries f{1.0, 2.0, 3.0, 4.0};
  EXPECT_TRUE(derivative(f).approx_equal(TruncatedSeries{2.0, 6.0, 12.0}, 0.0));
  EXPECT_TRUE(divide_by_z(multiply_by_z(f)).approx_equal(f, 0.0));
  EXPECT_TRUE(rescale_argument(f, -1.0).approx_equal(TruncatedSeries{1.0, -2.0, 3.0, -4.0}, 0.0));
  EXPECT_TRUE(power(f, 3).approx_equal(f * f * f, 1e-12));
  EXPECT_NEAR(std::abs(f.evaluate(0.5) - cplx(1.0 + 1.0 + 0.75 + 0.5)), 0.0, 1e-15);
}

TEST(Series, PreconditionErrors) {
  const TruncatedSeries no_const{0.0, 1.0, 2.0};
  const TruncatedSeries with_const{1.0, 1.0, 2.0};
  const TruncatedSeries flat{0.0, 0.0, 1.0};
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind_of([&] { reciprocal(no_const); }), ErrorKind::ZeroConstantTerm);
  EXPECT_EQ(kind_of([&] { compose(with_const, with_const); }), ErrorKind::NonzeroInnerConstant);
  EXPECT_EQ(kind_of([&] { compositional_inverse(with_const); }), ErrorKind::NonzeroInnerConstant);
  EXPECT_EQ(kind_of([&] { compositional_inverse(flat); }), ErrorKind::NonInvertible);
  EXPECT_EQ(kind_of([&] { TruncatedSeries{std::numeric_limits<double>::quiet_NaN()}; }),
            ErrorKind::NonFinite);
}

}  // namespace
}  // namespace ringlab
