#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ringlab/ensembles.hpp"
#include "ringlab/error.hpp"
#include "ringlab/quaternion.hpp"

namespace ringlab {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

TEST(QuaternionicR, DiagonalArgumentGivesZero) {
  Eigen::Matrix2cd q = Eigen::Matrix2cd::Zero();
  q(0, 0) = cplx(0.3, 0.1);
  q(1, 1) = cplx(0.3, -0.1);
  EXPECT_EQ(quaternionic_r(determining_function(EnsembleSpec::haar()), q).cwiseAbs().maxCoeff(), 0.0);
}

TEST(QuaternionicR, GinibreCopiesOffDiagonal) {
  Eigen::Matrix2cd q;
  q << 1.0, cplx(0.2, 0.5), cplx(-0.7, 0.1), 2.0;
  const Eigen::Matrix2cd r = quaternionic_r(determining_function(EnsembleSpec::ginibre()), q);
  EXPECT_EQ(r(0, 0), cplx{});
  EXPECT_EQ(r(0, 1), q(0, 1));
  EXPECT_EQ(r(1, 0), q(1, 0));
}

TEST(QuaternionicR, HaarPrefactorClosedForm) {
  const cplx w(0.3, 0.2);
  const double w2 = std::norm(w);
  Eigen::Matrix2cd q = Eigen::Matrix2cd::Zero();
  q(0, 1) = kI * std::conj(w);
  q(1, 0) = kI * w;
  const Eigen::Matrix2cd r = quaternionic_r(determining_function(EnsembleSpec::haar()), q);
  const double expect = (1.0 - std::sqrt(1.0 - 4.0 * w2)) / (2.0 * w2);
  EXPECT_NEAR(std::abs(r(0, 1) / q(0, 1) - expect), 0.0, 1e-14);
  // The series route agrees inside its radius.
  const Eigen::Matrix2cd rs = quaternionic_r(determining_sequence(EnsembleSpec::haar(), 30), q);
  EXPECT_NEAR(std::abs(rs(0, 1) - r(0, 1)), 0.0, 1e-8);
}

TEST(SolveSd, QuaternionPointMatrixForm) {
  const QuaternionPoint p{cplx(1, 2), cplx(3, 4)};
  const Eigen::Matrix2cd m = p.matrix();
  EXPECT_EQ(m(0, 0), cplx(1, 2));
  EXPECT_EQ(m(1, 1), cplx(1, -2));
  EXPECT_EQ(m(0, 1), kI * cplx(3, -4));
  EXPECT_EQ(m(1, 0), kI * cplx(3, 4));
}

TEST(SolveSd, GinibreTrivialOutsideAndNontrivialInside) {
  const auto a = determining_function(EnsembleSpec::ginibre());
  const cplx outside(1.3, 0.4);
  const QGreenValue t = solve_sd(a, outside, 1e-8);
  EXPECT_NEAR(std::abs(t.g11 - 1.0 / outside), 0.0, 1e-6);
  EXPECT_LT(t.overlap_weight(), 1e-12);

  const cplx inside(0.3, -0.4);
  const QGreenValue g = solve_sd(a, inside, 1e-8);
  EXPECT_NEAR(std::abs(g.g11 - std::conj(inside)), 0.0, 1e-6);
  EXPECT_NEAR(g.overlap_weight(), 1.0 - std::norm(inside), 1e-6);
  EXPECT_NEAR(-(g.g1w * g.gw1()).real(), g.overlap_weight(), 1e-15);
  EXPECT_EQ((g.g1w * g.gw1()).imag(), 0.0);
  EXPECT_EQ(g.g1bar1bar(), std::conj(g.g11));
}

TEST(SolveSd, GinibreOriginContinuity) {
  const auto a = determining_function(EnsembleSpec::ginibre());
  const QGreenValue g = solve_sd(a, 0.0, 1e-4);
  EXPECT_NEAR(g.overlap_weight(), 1.0, 2e-4);
  EXPECT_NEAR(solve_sd_limit(a, 0.0, 1e-4).overlap_weight(), 1.0, 1e-8);
}

TEST(SolveSd, ExplicitBranchesAtZeroRegulator) {
  const auto a = determining_function(EnsembleSpec::ginibre());
  const cplx z(0.5, 0.1);
  EXPECT_EQ(kind_of([&] { solve_sd(a, z, 0.0); }), ErrorKind::AmbiguousBranch);
  const QGreenValue triv = solve_sd(a, z, 0.0, {SdBranch::Trivial});
  EXPECT_TRUE(triv.trivial());
  EXPECT_NEAR(std::abs(triv.g11 - 1.0 / z), 0.0, 1e-15);
  const QGreenValue non = solve_sd(a, z, 0.0, {SdBranch::Nontrivial});
  EXPECT_NEAR(non.overlap_weight(), 1.0 - std::norm(z), 1e-12);
  EXPECT_EQ(kind_of([&] { solve_sd(a, 2.0, 0.0, {SdBranch::Nontrivial}); }), ErrorKind::NoValidBranch);
  EXPECT_TRUE(solve_sd(a, 2.0, 0.0).trivial());
}

TEST(SolveSd, LimitCorrectionIsLinearInRegulator) {
  const auto a = determining_function(EnsembleSpec::free_poisson(2.0));
  const auto model = single_ring_model(EnsembleSpec::free_poisson(2.0));
  const double s = 0.8;
  const double F = radial_cdf(model, s);
  const double e1 = std::abs((s * solve_sd(a, s, 1e-3).g11).real() - F);
  const double e2 = std::abs((s * solve_sd(a, s, 5e-4).g11).real() - F);
  EXPECT_NEAR(e1 / e2, 2.0, 0.05);
  EXPECT_LT(std::abs((s * solve_sd_limit(a, s, 1e-3).g11).real() - F), 1e-6);
}

TEST(SolveSd, RadialSweepMatchesSingleRing) {
  for (const auto& spec : {EnsembleSpec::ginibre(), EnsembleSpec::free_poisson(2.0)}) {
    const auto a = determining_function(spec);
    const auto model = single_ring_model(spec);
    const double r_out = ring_radii(model).outer;
    std::vector<double> radii;
    for (int i = 0; i < 50; ++i) radii.push_back((i + 0.5) / 50.0 * r_out);
    const auto sols = sweep_radial(a, radii, 1e-6, 0.7);
    const cplx dir = std::polar(1.0, 0.7);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double s = radii[i];
      EXPECT_NEAR((s * dir * sols[i].g11).real(), radial_cdf(model, s), 1e-4) << spec.name() << s;
      EXPECT_NEAR(sols[i].overlap_weight() / kPi, overlap_correlator(model, s), 1e-4) << spec.name() << s;
    }
  }
}

TEST(SolveSd, ProductAndSerialParallelAgreement) {
  const auto a = determining_function(EnsembleSpec::ginibre_product(2));
  const auto model = single_ring_model(EnsembleSpec::ginibre_product(2));
  std::vector<double> radii{0.2, 0.5, 0.8, 1.2};
  const auto par = sweep_radial(a, radii, 1e-7, 0.0, ExecPolicy::parallel(3));
  const auto ser = sweep_radial(a, radii, 1e-7, 0.0, ExecPolicy::serial());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    EXPECT_EQ(par[i].g11, ser[i].g11);
    EXPECT_EQ(par[i].g1w, ser[i].g1w);
    EXPECT_NEAR((radii[i] * par[i].g11).real(), radial_cdf(model, radii[i]), 1e-5);
  }
}

}  // namespace
}  // namespace ringlab
