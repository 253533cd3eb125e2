#pragma once
// Independent numerical oracles shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "eeplan/pathloss.hpp"
#include "eeplan/rng.hpp"

namespace oracle {

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

namespace detail {

// Poisson count with P(N = 0) removed; returns the count and the weight
// P(N >= 1) so that weight * sum over the conditioned points is unbiased.
inline long conditioned_poisson(double m, std::mt19937_64& g, double& weight) {
  if (m > 30.0) {
    weight = 1.0;
    return std::poisson_distribution<long>(m)(g);
  }
  const double p0 = std::exp(-m);
  weight = -std::expm1(-m);
  const double u = p0 + std::uniform_real_distribution<double>(0.0, 1.0)(g) * weight;
  long k = 0;
  double p = p0;
  double cdf = p0;
  while (u > cdf && k < 1000) {
    ++k;
    p *= m / k;
    cdf += p;
  }
  return std::max(k, 1L);
}

}  // namespace detail

/// \brief Brute-force PPP estimate of E{ sum_l (beta(y_l) / beta(r))^kappa }
/// over interferers beyond the Rayleigh serving distance r.
///
/// The PPP is split into independent annular shells (superposition) and the
/// serving distance into strata; each (stratum, shell) cell is sampled
/// directly, with Neyman allocation from a pilot pass. The part beyond the
/// outermost shell uses the power law of the last slope.
inline Estimate ppp_moment(const eeplan::PathLossModel& m, double lambda, int kappa, std::uint64_t seed,
                           long budget = 400000) {
  const double pl = std::numbers::pi * lambda;
  const double scale = 1.0 / std::sqrt(pl);

  std::vector<double> u_edges{0.0};
  for (double e = -12.0; e < -0.5; e += 0.5) u_edges.push_back(std::pow(10.0, e));
  for (double b : m.breakpoints) u_edges.push_back(-std::expm1(-pl * b * b));
  for (double v : {0.5, 0.7, 0.85, 0.95, 0.99, 0.999, 0.99999, 1.0}) u_edges.push_back(v);
  std::sort(u_edges.begin(), u_edges.end());
  u_edges.erase(std::unique(u_edges.begin(), u_edges.end()), u_edges.end());

  const double last_bp = m.breakpoints.empty() ? 0.0 : m.breakpoints.back();
  const double r_out = std::max(1.5 * last_bp, 8.0 * scale);
  std::vector<double> y_edges{0.0};
  for (double y = 1e-5 * scale; y < r_out; y *= 1.25) y_edges.push_back(y);
  for (double b : m.breakpoints) y_edges.push_back(b);
  y_edges.push_back(r_out);
  std::sort(y_edges.begin(), y_edges.end());
  y_edges.erase(std::unique(y_edges.begin(), y_edges.end()), y_edges.end());

  const std::size_t H = u_edges.size() - 1;
  const std::size_t S = y_edges.size();  // last index is the analytic tail
  const double aN = m.alpha.back();
  const double uN = m.upsilon.back();

  std::mt19937_64 g(eeplan::derive_seed(seed, "ppp-oracle"));
  std::uniform_real_distribution<double> U01(0.0, 1.0);

  auto sample = [&](std::size_t h, std::size_t s) {
    const double u0 = u_edges[h];
    const double u1 = u_edges[h + 1];
    double u = u0 + (u1 - u0) * U01(g);
    u = std::min(u, 1.0 - 1e-16);
    const double r = std::sqrt(-std::log1p(-u) / pl);
    const double br = eeplan::pathloss(r, m);
    if (s + 1 == S) {
      const double a = std::max(r, r_out);
      return 2.0 * pl * std::pow(uN / br, kappa) * std::pow(a, 2.0 - kappa * aN) / (kappa * aN - 2.0);
    }
    const double y0 = std::max(y_edges[s], r);
    const double y1 = y_edges[s + 1];
    if (y1 <= y0) return 0.0;
    double w = 1.0;
    const long n = detail::conditioned_poisson(pl * (y1 * y1 - y0 * y0), g, w);
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
      const double y = std::sqrt(y0 * y0 + (y1 * y1 - y0 * y0) * U01(g));
      acc += std::pow(eeplan::pathloss(y, m) / br, kappa);
    }
    return w * acc;
  };

  const int pilot = 24;
  std::vector<double> sd(H * S, 0.0), mean_pilot(H * S, 0.0);
  double total = 0.0;
  for (std::size_t h = 0; h < H; ++h)
    for (std::size_t s = 0; s < S; ++s) {
      double a = 0.0, a2 = 0.0;
      for (int i = 0; i < pilot; ++i) {
        const double v = sample(h, s);
        a += v;
        a2 += v * v;
      }
      a /= pilot;
      mean_pilot[h * S + s] = a;
      sd[h * S + s] = std::sqrt(std::max(0.0, a2 / pilot - a * a));
      total += (u_edges[h + 1] - u_edges[h]) * sd[h * S + s];
    }

  Estimate e;
  double var = 0.0;
  for (std::size_t h = 0; h < H; ++h) {
    const double w = u_edges[h + 1] - u_edges[h];
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t c = h * S + s;
      if (sd[c] == 0.0) {
        e.mean += w * mean_pilot[c];
        continue;
      }
      const long n = std::max(16L, static_cast<long>(budget * w * sd[c] / total));
      double a = 0.0, a2 = 0.0;
      for (long i = 0; i < n; ++i) {
        const double v = sample(h, s);
        a += v;
        a2 += v * v;
      }
      a /= static_cast<double>(n);
      const double v = std::max(0.0, a2 / n - a * a) * n / (n - 1.0);
      e.mean += w * a;
      var += w * w * v / n;
    }
  }
  e.stderr_ = std::sqrt(var);
  return e;
}

/// E{1/beta(r)} for Rayleigh r by composite Simpson integration per ring.
inline double mean_inverse_gain_quadrature(const eeplan::PathLossModel& m, double lambda) {
  const double pl = std::numbers::pi * lambda;
  const double r_max = std::sqrt(80.0 / pl);
  std::vector<double> edges{0.0};
  for (double b : m.breakpoints)
    if (b < r_max) edges.push_back(b);
  edges.push_back(std::max(r_max, edges.back() * 1.5));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    const int n = 20000;
    const double h = (b - a) / n;
    auto f = [&](double r) {
      if (r <= 0.0) return 0.0;
      const double rr = std::min(std::max(r, a + 1e-15 * (b - a)), b - 1e-15 * (b - a));
      return 2.0 * pl * r * std::exp(-pl * r * r) / eeplan::pathloss(rr, m);
    };
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    total += s * h / 3.0;
  }
  return total;
}

}  // namespace oracle
