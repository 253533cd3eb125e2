#pragma once

#include <algorithm>
#include <cmath>

#include "eeplan/errors.hpp"
#include "eeplan/moments.hpp"
#include "eeplan/power.hpp"
#include "eeplan/system_config.hpp"

namespace eeplan {

struct DesignPoint {
  double zeta = 1.0;
  double M = 1.0;
  double K = 1.0;
  double cbar() const { return M / K; }
};

struct OptimizationProblem {
  double lambda = 10.0;
  double gamma = 3.0;  // target SINR, linear
  SystemConfig config;
  MomentSet moments;
};

struct SinrBound {
  double sinr = 0.0;
  double interference = 0.0;  // INT term
  double se = 0.0;
};

/// Pre-log factor xi (1 - zeta K / tau_c).
inline double prelog(const SystemConfig& c, double zeta, double K) {
  const double f = c.xi * (1.0 - zeta * K / c.tau_c);
  if (!(f > 0.0)) throw domain_error("pilot length must be shorter than the coherence block");
  return f;
}

/// \brief Zeta-free and 1/zeta parts of the INT term: INT = B2 + Y/zeta.
// Pre-log clamped at zero: a block filled with pilots carries no data.
inline double payload_fraction(const SystemConfig& c, double zeta, double K) {
  return std::max(0.0, c.xi * (1.0 - zeta * K / c.tau_c));
}

struct InterferenceTerms {
  double B2;
  double Y;
};

inline InterferenceTerms interference_terms(double K, const MomentSet& mo, const SystemConfig& c) {
  const double ip = 1.0 / c.SNRp;
  const double i0 = 1.0 / c.SNR0;
  InterferenceTerms t;
  t.B2 = K * (ip + mo.mu1 * (1.0 + ip)) + (1.0 + ip) * i0;
  t.Y = mo.mu1 * i0 + K * mo.mu1 + K * mo.mu1 * mo.mu1;
  return t;
}

inline SinrBound zf_sinr_bound(const DesignPoint& p, const OptimizationProblem& pr) {
  require(p.M > p.K, "zf_sinr_bound: need M > K");
  require(p.zeta > 0.0, "zf_sinr_bound: zeta must be positive");
  const auto t = interference_terms(p.K, pr.moments, pr.config);
  SinrBound b;
  b.interference = t.B2 + t.Y / p.zeta;
  b.sinr = (p.M - p.K) / (b.interference + (p.M - p.K) * pr.moments.mu2 / p.zeta);
  b.se = payload_fraction(pr.config, p.zeta, p.K) * std::log2(1.0 + b.sinr);
  return b;
}

/// Closed-form MR bound: numerator M, extra K(1 + mu2/zeta), and a
/// contamination term scaling with M.
inline SinrBound mr_sinr_bound(const DesignPoint& p, const OptimizationProblem& pr) {
  require(p.zeta > 0.0, "mr_sinr_bound: zeta must be positive");
  const auto t = interference_terms(p.K, pr.moments, pr.config);
  const double mu2 = pr.moments.mu2;
  SinrBound b;
  b.interference = t.B2 + t.Y / p.zeta;
  b.sinr = p.M / (b.interference + p.K * (1.0 + mu2 / p.zeta) + p.M * mu2 / p.zeta);
  b.se = payload_fraction(pr.config, p.zeta, p.K) * std::log2(1.0 + b.sinr);
  return b;
}

inline SinrBound sinr_bound(Scheme s, const DesignPoint& p, const OptimizationProblem& pr) {
  if (s == Scheme::zf) return zf_sinr_bound(p, pr);
  if (s == Scheme::mr) return mr_sinr_bound(p, pr);
  throw domain_error("closed-form bound exists only for ZF and MR");
}

struct ZetaBoundCoefficients {
  double B1;
  double B2;
};

inline ZetaBoundCoefficients zeta_bound_coefficients(double M, double K, const MomentSet& mo,
                                                const SystemConfig& c) {
  const auto t = interference_terms(K, mo, c);
  return {K * (mo.mu1 * (1.0 + mo.mu1) - mo.mu2) + M * mo.mu2 + mo.mu1 / c.SNR0, t.B2};
}

struct ZetaResult {
  double zeta = 0.0;
  bool in_range = false;  // 1 <= zeta < tau_c / K
};

/// Pilot reuse that meets the SINR target with equality.
inline ZetaResult optimal_zeta(double M, double K, double gamma, const OptimizationProblem& pr,
                               Scheme s = Scheme::zf) {
  const auto [B1, B2] = zeta_bound_coefficients(M, K, pr.moments, pr.config);
  double num = B1 * gamma;
  double den = M - K - B2 * gamma;
  if (s == Scheme::mr) {
    num += 2.0 * K * pr.moments.mu2 * gamma;
    den = M - K * gamma - B2 * gamma;
  } else if (s != Scheme::zf) {
    throw domain_error("optimal_zeta: closed form exists only for ZF and MR");
  }
  if (!(den > 0.0)) throw infeasible_error("optimal_zeta: SINR target unreachable at this (M, K)");
  ZetaResult r;
  r.zeta = num / den;
  r.in_range = r.zeta >= 1.0 && r.zeta * K < pr.config.tau_c;
  return r;
}

}  // namespace eeplan
