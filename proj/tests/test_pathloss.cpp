#include <gtest/gtest.h>

#include <cmath>

#include "eeplan/pathloss.hpp"

using namespace eeplan;

TEST(PathLoss, LiteralDefaultValues) {
  const auto m = default_pathloss(InterceptMode::literal);
  EXPECT_DOUBLE_EQ(pathloss(0.005, m), 1.0);
  EXPECT_NEAR(pathloss(0.1, m), 100.0, 1e-12);
  EXPECT_NEAR(pathloss(1.0, m), std::pow(10.0, -14.81), 1e-27);
  EXPECT_NEAR(pathloss(1.0, m), 1.549e-15, 1e-18);
}

TEST(PathLoss, ContinuityModeIsContinuous) {
  const auto m = default_pathloss(InterceptMode::continuity);
  for (double b : m.breakpoints) {
    const double lo = pathloss(b * (1 - 1e-12), m);
    const double hi = pathloss(b * (1 + 1e-12), m);
    EXPECT_NEAR(lo / hi, 1.0, 1e-9) << b;
  }
  // far slope is untouched, inner intercepts back-propagated
  EXPECT_NEAR(pathloss(1.0, m), std::pow(10.0, -14.81), 1e-27);
  EXPECT_NEAR(m.upsilon[1], m.upsilon[2] * std::pow(0.446, -2.0), 1e-12 * m.upsilon[1]);
  EXPECT_NEAR(m.upsilon[0], m.upsilon[1] * std::pow(0.010, -2.0), 1e-12 * m.upsilon[0]);
}

TEST(PathLoss, MonotoneInContinuityMode) {
  const auto m = default_pathloss(InterceptMode::continuity);
  double prev = pathloss(1e-4, m);
  for (double d = 2e-4; d < 5.0; d *= 1.1) {
    const double v = pathloss(d, m);
    EXPECT_LE(v, prev * (1 + 1e-12));
    prev = v;
  }
}

TEST(PathLoss, SingleSlope) {
  const auto m = single_slope(3.5, 2.0);
  EXPECT_NEAR(pathloss(0.5, m), 2.0 * std::pow(0.5, -3.5), 1e-12);
  EXPECT_TRUE(m.breakpoints.empty());
}

TEST(PathLoss, Validation) {
  EXPECT_THROW(make_pathloss_model({2.0, 4.0}, {}, 1.0, InterceptMode::literal), domain_error);
  EXPECT_THROW(make_pathloss_model({2.0, 4.0}, {-0.1}, 1.0, InterceptMode::literal), domain_error);
  EXPECT_THROW(make_pathloss_model({0.0, 2.0, 4.0}, {0.4, 0.1}, 1.0, InterceptMode::literal), domain_error);
  EXPECT_THROW(make_pathloss_model({4.0, 2.0}, {0.1}, 1.0, InterceptMode::literal), domain_error);
  EXPECT_THROW(make_pathloss_model({2.0}, {}, 1.0, InterceptMode::literal), domain_error);
  EXPECT_THROW(make_pathloss_model({4.0}, {}, 0.0, InterceptMode::literal), domain_error);
  EXPECT_THROW(pathloss(0.0, default_pathloss()), domain_error);
}

TEST(PathLoss, FingerprintDistinguishesModes) {
  EXPECT_NE(default_pathloss(InterceptMode::literal).fingerprint(),
            default_pathloss(InterceptMode::continuity).fingerprint());
  EXPECT_EQ(default_pathloss().fingerprint(), default_pathloss().fingerprint());
}
