#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eeplan/moments.hpp"
#include "oracles.hpp"

using namespace eeplan;

TEST(Moments, SingleSlopeClosedForm) {
  for (double a : {3.0, 4.0, 6.0})
    for (int k : {1, 2})
      for (double lam : {1.0, 10.0, 50.0, 100.0})
        EXPECT_NEAR(interference_moment(single_slope(a), lam, k), 2.0 / (k * a - 2.0), 1e-10);
  EXPECT_NEAR(interference_moment(single_slope(4.0), 1.0, 2), 1.0 / 3.0, 1e-12);
}

TEST(Moments, AgreesWithPppOracle) {
  struct Case {
    PathLossModel m;
    double lambda;
    int kappa;
  };
  const std::vector<Case> cases{{default_pathloss(), 10.0, 1},
                                {default_pathloss(), 10.0, 2},
                                {default_pathloss(InterceptMode::continuity), 10.0, 2},
                                {single_slope(3.0), 1.0, 1}};
  for (const auto& c : cases) {
    const double cf = interference_moment(c.m, c.lambda, c.kappa);
    const auto mc = oracle::ppp_moment(c.m, c.lambda, c.kappa, 11, 150000);
    EXPECT_LT(3.0 * mc.stderr_, 0.02 * cf);
    EXPECT_NEAR(mc.mean, cf, std::max(0.02 * cf, 3.0 * mc.stderr_)) << c.m.fingerprint();
  }
}

TEST(Moments, LogLimitIsContinuousInExponent) {
  // kappa * alpha = 2 on the middle ring uses the logarithmic limit
  auto model = [](double a2) {
    return make_pathloss_model({0.0, a2, 4.0}, {0.010, 0.446}, std::pow(10.0, -14.81), InterceptMode::continuity);
  };
  const double at = interference_moment(model(2.0), 10.0, 1);
  const double below = interference_moment(model(2.0 - 1e-7), 10.0, 1);
  const double above = interference_moment(model(2.0 + 1e-7), 10.0, 1);
  EXPECT_NEAR(at, below, 1e-5 * at);
  EXPECT_NEAR(at, above, 1e-5 * at);
}

TEST(Moments, RejectsNonIntegrableTail) {
  const auto m = make_pathloss_model({2.5}, {}, 1.0, InterceptMode::literal);
  EXPECT_NO_THROW(interference_moment(m, 1.0, 1));
  EXPECT_THROW(interference_moment(m, 1.0, 3), domain_error);
  EXPECT_THROW(interference_moment(m, 0.0, 1), domain_error);
}

TEST(UplinkPower, SingleSlopeExample) {
  SystemConfig c;
  const auto m = single_slope(4.0);
  const double U = mean_uplink_power(m, 10.0, c).U;
  const double expect = 2.0 * c.P0() / (m.upsilon[0] * std::pow(std::numbers::pi * 10.0, 2));
  EXPECT_NEAR(U, expect, 1e-12 * expect);
  EXPECT_NEAR(U, 1.65, 0.01);
}

TEST(UplinkPower, MatchesQuadratureOracle) {
  for (auto m : {default_pathloss(), default_pathloss(InterceptMode::continuity), single_slope(3.0)})
    for (double lam : {1.0, 10.0, 50.0}) {
      const double q = oracle::mean_inverse_gain_quadrature(m, lam);
      EXPECT_NEAR(mean_inverse_gain(m, lam), q, 1e-6 * q) << m.fingerprint() << " " << lam;
    }
}

TEST(UplinkPower, RayleighMonteCarlo) {
  // E{d^4}/Upsilon over Rayleigh draws
  const auto m = single_slope(4.0);
  std::mt19937_64 g(3);
  std::exponential_distribution<double> e(std::numbers::pi * 10.0);
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double d2 = e(g);
    acc += 1.0 / pathloss(std::sqrt(d2), m);
  }
  const double cf = mean_inverse_gain(m, 10.0);
  EXPECT_NEAR(acc / n, cf, 0.005 * cf);
}

TEST(UplinkPower, ZeroPowerGivesZero) {
  SystemConfig c;
  c.SNR0 = 0.0;
  EXPECT_EQ(mean_uplink_power(default_pathloss(), 10.0, c).U, 0.0);
}

TEST(Moments, ComputeMomentsTagsModel) {
  SystemConfig c;
  const auto s = compute_moments(default_pathloss(), 10.0, c);
  EXPECT_EQ(s.model_fingerprint, default_pathloss().fingerprint());
  EXPECT_DOUBLE_EQ(s.U, c.P0() * s.mean_inv_beta);
}
