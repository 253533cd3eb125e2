#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "eeplan/errors.hpp"
#include "eeplan/pathloss.hpp"
#include "eeplan/special.hpp"
#include "eeplan/system_config.hpp"

namespace eeplan {

struct MomentSet {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mean_inv_beta = 0.0;  // E{1/beta} of the serving link
  double U = 0.0;              // W, P0 * E{1/beta}
  double lambda = 0.0;
  std::string model_fingerprint;
};

namespace detail {

// Integral of x^(1-e) over [a, b]; b may be infinite when e > 2.
inline double ring_power_integral(double e, double a, double b) {
  if (e == 2.0) return std::log(b / a);
  if (std::isinf(b)) return std::pow(a, 2.0 - e) / (e - 2.0);
  return (std::pow(a, 2.0 - e) - std::pow(b, 2.0 - e)) / (e - 2.0);
}

}  // namespace detail

/// \brief Closed-form interference moment mu_kappa for a typical UE whose
/// serving distance is Rayleigh and whose interferers form a PPP beyond it.
///
/// A ring with kappa*alpha_n = 2 uses the logarithmic limit of the general
/// expression instead of dividing by zero.
inline double interference_moment(const PathLossModel& m, double lambda, int kappa) {
  m.validate();
  require(lambda > 0.0, "interference_moment: lambda must be positive");
  require(kappa == 1 || kappa == 2, "interference_moment: kappa must be 1 or 2");
  require(kappa * m.alpha.back() > 2.0, "interference_moment: kappa*alpha_N must exceed 2");

  const double pl = std::numbers::pi * lambda;
  const std::size_t N = m.slopes();
  double total = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    const double e = kappa * m.alpha[n];
    const double a = m.inner(n);
    const double b = m.outer(n);
    const double Ta = pl * a * a;
    const double Tb = std::isinf(b) ? b : pl * b * b;

    double tail = 0.0;
    for (std::size_t i = n + 1; i < N; ++i) {
      const double ratio = std::pow(m.upsilon[i] / m.upsilon[n], kappa);
      tail += ratio * detail::ring_power_integral(kappa * m.alpha[i], m.inner(i), m.outer(i));
    }

    double within;
    double c = tail;
    if (e == 2.0) {
      // int_a^b y^2 ln(b/y) f_d(y) dy, written in t = pi*lambda*y^2.
      within = 0.5 / pl *
               (std::log(Tb) * gamma_interval(2.0, Ta, Tb) -
                (t_log_t_exp_antiderivative(Tb) - t_log_t_exp_antiderivative(Ta)));
    } else {
      within = gamma_interval(2.0, Ta, Tb) / ((e - 2.0) * pl);
      if (!std::isinf(b)) c -= std::pow(b, 2.0 - e) / (e - 2.0);
    }
    const double ye = gamma_interval(1.0 + e / 2.0, Ta, Tb) / std::pow(pl, e / 2.0);
    total += within + c * ye;
  }
  return 2.0 * pl * total;
}

/// E{1/beta} of the serving link with Rayleigh serving distance.
inline double mean_inverse_gain(const PathLossModel& m, double lambda) {
  m.validate();
  require(lambda > 0.0, "mean_inverse_gain: lambda must be positive");
  const double pl = std::numbers::pi * lambda;
  double s = 0.0;
  for (std::size_t n = 0; n < m.slopes(); ++n) {
    const double a = m.inner(n);
    const double b = m.outer(n);
    const double Tb = std::isinf(b) ? b : pl * b * b;
    s += gamma_interval((2.0 + m.alpha[n]) / 2.0, pl * a * a, Tb) /
         (m.upsilon[n] * std::pow(pl, m.alpha[n] / 2.0));
  }
  return s;
}

struct UplinkPower {
  double mean_inv_beta;
  double U;  // W
};

inline UplinkPower mean_uplink_power(const PathLossModel& m, double lambda, const SystemConfig& cfg) {
  const double e = mean_inverse_gain(m, lambda);
  return {e, cfg.P0() * e};
}

inline MomentSet compute_moments(const PathLossModel& m, double lambda, const SystemConfig& cfg) {
  MomentSet s;
  s.mu1 = interference_moment(m, lambda, 1);
  s.mu2 = interference_moment(m, lambda, 2);
  const auto up = mean_uplink_power(m, lambda, cfg);
  s.mean_inv_beta = up.mean_inv_beta;
  s.U = up.U;
  s.lambda = lambda;
  s.model_fingerprint = m.fingerprint();
  return s;
}

}  // namespace eeplan
