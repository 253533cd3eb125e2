#include <gtest/gtest.h>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "eeplan/special.hpp"

using eeplan::expint_e1;
using eeplan::gamma_interval;
using eeplan::upper_incomplete_gamma;

TEST(IncompleteGamma, KnownValues) {
  EXPECT_NEAR(upper_incomplete_gamma(2.0, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(upper_incomplete_gamma(1.0, 1.0), std::exp(-1.0), 1e-14);
  EXPECT_NEAR(upper_incomplete_gamma(3.0, 2.0), 10.0 * std::exp(-2.0), 1e-13);
}

TEST(IncompleteGamma, MatchesBoostAcrossBranches) {
  for (double s : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 7.0, 13.0})
    for (double x : {0.0, 1e-6, 0.1, 0.9, 1.9, 2.1, 5.0, 12.0, 14.5, 40.0, 300.0}) {
      const double ref = boost::math::tgamma(s, x);
      EXPECT_NEAR(upper_incomplete_gamma(s, x), ref, 1e-12 * std::max(ref, 1e-300) + 1e-300)
          << "s=" << s << " x=" << x;
    }
}

TEST(IncompleteGamma, ContinuousAtBranchSwitch) {
  for (double s : {1.5, 3.0, 9.0}) {
    const double x = s + 1.0;
    EXPECT_NEAR(upper_incomplete_gamma(s, x - 1e-9), upper_incomplete_gamma(s, x + 1e-9),
                1e-8 * upper_incomplete_gamma(s, x));
  }
}

TEST(IncompleteGamma, IntervalIsCancellationSafe) {
  for (double s : {1.0, 2.0, 3.0, 5.0})
    for (auto [a, b] : {std::pair{0.0, 1e-8}, {1e-8, 2e-8}, {0.5, 3.0}, {3.0, 40.0}, {30.0, 31.0}}) {
      // difference on the side that does not cancel
      const double r = a >= s ? boost::math::tgamma(s, a) - boost::math::tgamma(s, b)
                              : boost::math::tgamma_lower(s, b) - boost::math::tgamma_lower(s, a);
      EXPECT_NEAR(gamma_interval(s, a, b), r, 1e-10 * std::abs(r) + 1e-300) << s << " " << a << " " << b;
    }
  EXPECT_GT(gamma_interval(2.0, 0.0, 1e-10), 0.0);
  EXPECT_EQ(gamma_interval(2.0, 3.0, 3.0), 0.0);
}

TEST(IncompleteGamma, RejectsBadArguments) {
  EXPECT_THROW(upper_incomplete_gamma(0.0, 1.0), eeplan::domain_error);
  EXPECT_THROW(upper_incomplete_gamma(1.0, -1.0), eeplan::domain_error);
  EXPECT_THROW(gamma_interval(1.0, 2.0, 1.0), eeplan::domain_error);
}

TEST(ExponentialIntegral, MatchesBoost) {
  for (double x : {1e-8, 0.01, 0.5, 0.999, 1.0, 1.001, 3.0, 20.0, 31.0, 200.0, 700.0})
    EXPECT_NEAR(expint_e1(x), boost::math::expint(1, x), 1e-13 * boost::math::expint(1, x));
}

TEST(LogAntiderivative, DerivativeAndLimit) {
  using eeplan::t_log_t_exp_antiderivative;
  EXPECT_NEAR(t_log_t_exp_antiderivative(0.0), std::numbers::egamma - 1.0, 1e-15);
  EXPECT_NEAR(t_log_t_exp_antiderivative(1e-12), std::numbers::egamma - 1.0, 1e-9);
  EXPECT_EQ(t_log_t_exp_antiderivative(std::numeric_limits<double>::infinity()), 0.0);
  for (double t : {0.05, 0.7, 2.0, 9.0}) {
    const double h = 1e-5 * t;
    const double d = (t_log_t_exp_antiderivative(t + h) - t_log_t_exp_antiderivative(t - h)) / (2 * h);
    EXPECT_NEAR(d, t * std::log(t) * std::exp(-t), 1e-7) << t;
  }
}
