#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "eeplan/bounds.hpp"
#include "eeplan/polynomial.hpp"
#include "eeplan/power.hpp"

namespace eeplan {

/// \brief EE of a closed-form design with the SINR target met exactly.
///
/// Returns the full breakdown. The SE is the target-rate SE at zeta.
inline EEBreakdown design_ee(const OptimizationProblem& pr, Scheme s, double zeta, double M, double K) {
  const auto& c = pr.config;
  const double se = std::max(0.0, c.xi * (1.0 - zeta * K / c.tau_c)) * std::log2(1.0 + pr.gamma);
  return evaluate_design(s, pr.lambda, zeta, M, K, se, pr.moments.U, c);
}

/// Auxiliary coefficients of the c-bar and K sub-problems.
///
/// With x = zeta* K / tau_c:
///   fixed K:     x = (a0 c + a1) / (a2 c - a3),
///                APC/lambda = a4 c + a5 + (a6 + a7 c) x (backhaul term excluded)
///   fixed c-bar: x = K (b0 K + b1) / (b2 K - b3),
///                APC/lambda = b4 + b5 K + b6 K^2 + b7 K^3 + (b8 K + b9 K^2) x
/// a7 and b9 carry the pilot-length dependence of the estimation and
/// payload-reception costs.
struct CoefficientSet {
  double a[8]{};
  double b[10]{};
  double B1 = 0.0;
  double B2 = 0.0;
};

inline CoefficientSet cbar_coefficients(double K, const OptimizationProblem& pr) {
  const auto& c = pr.config;
  const auto& mo = pr.moments;
  const double g = pr.gamma;
  const auto k = apc_zf_coefficients(c, mo.U);
  const auto t = interference_terms(K, mo, c);
  CoefficientSet s;
  s.B2 = t.B2;
  s.a[0] = g * mo.mu2 * K * K / c.tau_c;
  s.a[1] = g * K * (K * (mo.mu1 * (1.0 + mo.mu1) - mo.mu2) + mo.mu1 / c.SNR0) / c.tau_c;
  s.a[2] = K;
  s.a[3] = K + g * t.B2;
  s.a[4] = k.D0 * K + k.D1 * K * K + k.D2 * K * K * K;
  s.a[5] = k.C0 + k.C1 * K + k.C3 * K * K * K;
  s.a[6] = c.tau_c * k.C2 * K;
  s.a[7] = c.tau_c * k.E * K * K;
  return s;
}

inline CoefficientSet k_coefficients(double cbar, const OptimizationProblem& pr) {
  const auto& c = pr.config;
  const auto& mo = pr.moments;
  const double g = pr.gamma;
  const double ip = 1.0 / c.SNRp;
  const auto k = apc_zf_coefficients(c, mo.U);
  CoefficientSet s;
  s.b[0] = g * (mo.mu1 * (1.0 + mo.mu1) - mo.mu2 + cbar * mo.mu2) / c.tau_c;
  s.b[1] = g * mo.mu1 / (c.SNR0 * c.tau_c);
  s.b[2] = cbar - 1.0 - mo.mu1 * g * (1.0 + ip) - g * ip;
  s.b[3] = g / c.SNR0 * (1.0 + ip);
  s.b[4] = k.C0;
  s.b[5] = k.C1 + k.D0 * cbar;
  s.b[6] = k.D1 * cbar;
  s.b[7] = k.C3 + k.D2 * cbar;
  s.b[8] = c.tau_c * k.C2;
  s.b[9] = c.tau_c * k.E * cbar;
  return s;
}

struct CbarResult {
  double cbar = 0.0;
  double cbar0 = 0.0;  // interior stationary point
  double cbar1 = 0.0;  // lower limit (pilots fill the block)
  double cbar2 = 0.0;  // upper limit (zeta = 1), may be +inf
};

/// Antennas-per-UE ratio maximizing the closed-form EE at fixed K.
inline CbarResult optimal_cbar(double K, const OptimizationProblem& pr) {
  const auto s = cbar_coefficients(K, pr);
  const double* a = s.a;
  const double tau = pr.config.tau_c;
  const double r0 = a[2] - a[0];
  const double r1 = a[1] + a[3];
  if (!(r0 > 0.0)) throw infeasible_error("optimal_cbar: target SINR too high for this K");
  const double Q2 = a[2] * a[4] + a[0] * a[7];
  const double Q1 = a[2] * a[5] - a[3] * a[4] + a[0] * a[6] + a[1] * a[7];
  const double Q0 = a[1] * a[6] - a[3] * a[5];
  const double rr = r1 / r0;
  const double disc = rr * rr + Q0 / Q2 + (Q1 / Q2) * rr;
  if (!(disc >= 0.0)) throw infeasible_error("optimal_cbar: no stationary point");
  CbarResult r;
  r.cbar0 = rr + std::sqrt(disc);
  r.cbar1 = rr;
  const double den2 = a[2] - tau * a[0] / K;
  r.cbar2 = den2 > 0.0 ? (tau * a[1] / K + a[3]) / den2 : std::numeric_limits<double>::infinity();
  if (r.cbar1 > r.cbar2) throw infeasible_error("optimal_cbar: empty feasible interval");
  r.cbar = std::min(std::max(r.cbar0, r.cbar1), r.cbar2);
  return r;
}

enum class KMode { exact, asymptotic };

struct KResult {
  double K = 0.0;
  double lo = 0.0;  // feasible interval
  double hi = 0.0;
  int admissible_roots = 0;
  bool fallback = false;  // no admissible stationary point; boundary chosen
};

/// Numerator and denominator of the fixed-c-bar EE, both scaled by (b2 K - b3).
inline std::pair<polynomial<double>, polynomial<double>> k_objective(const CoefficientSet& s) {
  const double* b = s.b;
  polynomial<double> f{0.0, -b[3], b[2] - b[1], -b[0]};
  polynomial<double> g = polynomial<double>{b[4], b[5], b[6], b[7]} * polynomial<double>{-b[3], b[2]} +
                         polynomial<double>{0.0, b[8], b[9]} * polynomial<double>{0.0, b[1], b[0]};
  return {f, g};
}

/// Users per cell maximizing the closed-form EE at fixed c-bar.
inline KResult optimal_K(double cbar, const OptimizationProblem& pr, KMode mode = KMode::exact) {
  const auto s = k_coefficients(cbar, pr);
  const double* b = s.b;
  const double tau = pr.config.tau_c;
  if (!(b[2] > 0.0)) throw infeasible_error("optimal_K: c-bar too small for the SINR target");

  // x <= 1  <=>  b0 K^2 + (b1 - b2) K + b3 <= 0
  const double qb = b[1] - b[2];
  const double disc = qb * qb - 4.0 * b[0] * b[3];
  if (!(disc > 0.0)) throw infeasible_error("optimal_K: SINR target unreachable at this c-bar");
  const double sq = std::sqrt(disc);
  double lo = std::max({1.0, b[3] / b[2], (-qb - sq) / (2.0 * b[0])});
  double hi = (-qb + sq) / (2.0 * b[0]);
  // zeta >= 1  <=>  K (tau b0 - b2) >= -(b3 + tau b1)
  const double lin = tau * b[0] - b[2];
  if (lin < 0.0) hi = std::min(hi, (b[3] + tau * b[1]) / (-lin));
  if (lin > 0.0) lo = std::max(lo, -(b[3] + tau * b[1]) / lin);
  if (!(lo < hi)) throw infeasible_error("optimal_K: empty feasible interval");

  KResult r;
  r.lo = lo;
  r.hi = hi;
  if (mode == KMode::asymptotic) {
    r.K = b[4] / b[5] * (std::sqrt(1.0 + (b[2] - b[1]) * b[5] / (b[0] * b[4])) - 1.0);
    return r;
  }
  const auto [f, g] = k_objective(s);
  const auto h = f.derivative() * g - f * g.derivative();
  auto value = [&](double K) { return f(K) / g(K); };
  double best_K = lo;
  double best_v = -std::numeric_limits<double>::infinity();
  bool interior = false;
  for (double root : real_roots(h)) {
    if (root <= lo || root >= hi) continue;
    ++r.admissible_roots;
    const double v = value(root);
    if (v > best_v) {
      best_v = v;
      best_K = root;
      interior = true;
    }
  }
  for (double edge : {lo, hi}) {
    const double v = value(edge);
    if (v > best_v + 1e-12 * std::abs(best_v)) {
      best_v = v;
      best_K = edge;
      interior = false;
    }
  }
  r.K = best_K;
  r.fallback = !interior;
  return r;
}

/// \brief Integer projection of the relaxed optimum.
///
/// nearest: round (M, K), falling back to the best feasible 8-neighbour.
/// refit: round K to K-1..K+1, re-solve c-bar at each integer K, and keep the
/// best feasible M within one of the rounded c-bar*K.
enum class Projection { nearest, refit };

struct TraceEntry {
  int iteration = 0;
  double cbar = 0.0;
  double K = 0.0;
  double M = 0.0;
  double zeta = 0.0;
  double ee_after_cbar = 0.0;
  double ee_after_K = 0.0;
};

struct AlternatingResult {
  DesignPoint relaxed;
  DesignPoint point;  // integer M, K
  EEBreakdown ee;     // at the integer point
  int iterations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;
};

inline std::string format_trace(const TraceEntry& t) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "it=%d cbar=%.6g K=%.6g M=%.6g zeta=%.6g ee=%.6g/%.6g", t.iteration,
                t.cbar, t.K, t.M, t.zeta, t.ee_after_cbar, t.ee_after_K);
  return buf;
}

namespace detail {

inline std::optional<EEBreakdown> integer_design(const OptimizationProblem& pr, Scheme s, int M, int K,
                                                 double* zeta_out) {
  if (K < 1 || M < 1 || (s == Scheme::zf && M <= K)) return std::nullopt;
  try {
    const auto z = optimal_zeta(M, K, pr.gamma, pr, s);
    if (!z.in_range) return std::nullopt;
    if (zeta_out) *zeta_out = z.zeta;
    return design_ee(pr, s, z.zeta, M, K);
  } catch (const infeasible_error&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// \brief Alternate the c-bar and K updates until the normalized step
/// falls below epsilon, then project onto integers.
inline AlternatingResult alternating_optimize(const OptimizationProblem& pr, const DesignPoint& init,
                                              double epsilon = 1e-4, int max_iter = 100,
                                              KMode mode = KMode::exact,
                                              Projection projection = Projection::nearest) {
  require(epsilon > 0.0 && epsilon < 1.0, "alternating_optimize: epsilon must lie in (0,1)");
  require(init.K >= 1.0 && init.M > init.K, "alternating_optimize: infeasible initial point");
  auto relaxed_ee = [&](double cbar, double K) {
    const double M = cbar * K;
    const auto z = optimal_zeta(M, K, pr.gamma, pr);
    return design_ee(pr, Scheme::zf, z.zeta, M, K).ee;
  };

  AlternatingResult res;
  DesignPoint prev = init;
  double K = init.K;
  double last_ee = -std::numeric_limits<double>::infinity();
  std::vector<std::string> text;
  for (int it = 1; it <= max_iter; ++it) {
    TraceEntry t;
    t.iteration = it;
    t.cbar = optimal_cbar(K, pr).cbar;
    t.ee_after_cbar = relaxed_ee(t.cbar, K);
    K = optimal_K(t.cbar, pr, mode).K;
    t.K = K;
    t.M = t.cbar * K;
    t.zeta = optimal_zeta(t.M, K, pr.gamma, pr).zeta;
    t.ee_after_K = relaxed_ee(t.cbar, K);
    res.trace.push_back(t);
    text.push_back(format_trace(t));
    if (mode == KMode::exact) {
      const double tol = 1e-9 * std::abs(t.ee_after_K);
      if (t.ee_after_cbar < last_ee - tol || t.ee_after_K < t.ee_after_cbar - tol)
        throw non_convergence_error("alternating_optimize: EE decreased", text);
    }
    last_ee = t.ee_after_K;
    const DesignPoint cur{t.zeta, t.M, K};
    const double step = std::max({std::abs(cur.zeta - prev.zeta) / std::abs(cur.zeta),
                                  std::abs(cur.cbar() - prev.cbar()) / std::abs(cur.cbar()),
                                  std::abs(cur.K - prev.K) / std::abs(cur.K)});
    prev = cur;
    res.iterations = it;
    if (step < epsilon) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged)
    throw non_convergence_error("alternating_optimize: iteration cap reached", text);
  res.relaxed = prev;

  const int M0 = static_cast<int>(std::lround(prev.M));
  const int K0 = static_cast<int>(std::lround(prev.K));
  bool found = false;
  auto consider = [&](int M, int K) {
    double z = 0.0;
    auto e = detail::integer_design(pr, Scheme::zf, M, K, &z);
    if (e && (!found || e->ee > res.ee.ee)) {
      found = true;
      res.ee = *e;
      res.point = {z, double(M), double(K)};
    }
  };
  if (projection == Projection::nearest) {
    consider(M0, K0);
    if (found) return res;
    for (int dM = -1; dM <= 1; ++dM)
      for (int dK = -1; dK <= 1; ++dK) consider(M0 + dM, K0 + dK);
  } else {
    for (int K = std::max(1, K0 - 1); K <= K0 + 1; ++K) {
      double cb = 0.0;
      try {
        cb = optimal_cbar(K, pr).cbar;
      } catch (const infeasible_error&) {
        continue;
      }
      const int Mr = static_cast<int>(std::lround(cb * K));
      for (int M = Mr - 1; M <= Mr + 1; ++M) consider(M, K);
    }
  }
  if (!found) throw infeasible_error("alternating_optimize: no feasible integer point near optimum");
  return res;
}

struct GridCell {
  int M = 0;
  int K = 0;
  double zeta = 0.0;
  bool feasible = false;
  std::string reason;  // empty when feasible
  EEBreakdown ee;
};

struct GridResult {
  int M_min = 0, M_max = 0, K_min = 0, K_max = 0;
  std::vector<GridCell> cells;  // row-major in K, then M
  GridCell best;

  const GridCell& at(int M, int K) const {
    return cells[static_cast<std::size_t>((K - K_min) * (M_max - M_min + 1) + (M - M_min))];
  }
};

inline GridCell evaluate_grid_cell(const OptimizationProblem& pr, Scheme s, int M, int K) {
  GridCell c;
  c.M = M;
  c.K = K;
  if (s == Scheme::zf && M <= K) {
    c.reason = "M<=K";
    return c;
  }
  ZetaResult z;
  try {
    z = optimal_zeta(M, K, pr.gamma, pr, s);
  } catch (const infeasible_error&) {
    c.reason = "unreachable";
    return c;
  }
  c.zeta = z.zeta;
  if (z.zeta < 1.0) {
    c.reason = "zeta<1";
    return c;
  }
  if (z.zeta * K >= pr.config.tau_c) {
    c.reason = "zetaK>=tau_c";
    return c;
  }
  c.feasible = true;
  c.ee = design_ee(pr, s, z.zeta, M, K);
  return c;
}

/// Exhaustive search over the integer (M, K) grid.
inline GridResult grid_search(const OptimizationProblem& pr, int M_min, int M_max, int K_min, int K_max,
                              Scheme s) {
  require(M_min >= 1 && M_max >= M_min && K_min >= 1 && K_max >= K_min, "grid_search: bad ranges");
  GridResult g;
  g.M_min = M_min;
  g.M_max = M_max;
  g.K_min = K_min;
  g.K_max = K_max;
  bool any = false;
  for (int K = K_min; K <= K_max; ++K)
    for (int M = M_min; M <= M_max; ++M) {
      g.cells.push_back(evaluate_grid_cell(pr, s, M, K));
      const auto& c = g.cells.back();
      if (c.feasible && (!any || c.ee.ee > g.best.ee.ee)) {
        g.best = c;
        any = true;
      }
    }
  if (!any) throw infeasible_error("grid_search: no feasible grid point");
  return g;
}

/// \brief True when no local maximum other than the global one reaches
/// `fraction` of the peak. NaN entries are skipped.
inline bool is_unimodal(const std::vector<double>& v, double fraction = 0.995) {
  std::vector<double> f;
  for (double x : v)
    if (!std::isnan(x)) f.push_back(x);
  if (f.size() < 3) return true;
  const auto peak_it = std::max_element(f.begin(), f.end());
  const double peak = *peak_it;
  const auto peak_idx = static_cast<std::size_t>(peak_it - f.begin());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i == peak_idx) continue;
    const bool left = i == 0 || f[i] >= f[i - 1];
    const bool right = i + 1 == f.size() || f[i] >= f[i + 1];
    if (left && right && f[i] >= fraction * peak && f[i] != peak) return false;
  }
  return true;
}


struct ZetaSearch {
  double zeta = 0.0;
  EEBreakdown ee;
};

/// \brief Pilot reuse maximizing closed-form EE at fixed (M, K), searched
/// over [1, tau_c/K) on a fine grid with golden-section refinement.
inline ZetaSearch best_zeta_closed(Scheme s, double M, double K, const OptimizationProblem& pr) {
  const double hi = pr.config.tau_c / K;
  require(hi > 1.0, "best_zeta_closed: K too large for the coherence block");
  auto eval = [&](double z) {
    const auto b = sinr_bound(s, {z, M, K}, pr);
    return evaluate_design(s, pr.lambda, z, M, K, b.se, pr.moments.U, pr.config);
  };
  const int n = 2000;
  double bz = 1.0;
  double bv = -1.0;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 + (hi - 1.0) * i / n;
    const double v = eval(z).ee;
    if (v > bv) bv = v, bz = z;
  }
  const double h = (hi - 1.0) / n;
  double a = std::max(1.0, bz - h);
  double b = std::min(hi - 1e-9 * hi, bz + h);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double x1 = b - g * (b - a);
    const double x2 = a + g * (b - a);
    if (eval(x1).ee >= eval(x2).ee) b = x2;
    else a = x1;
  }
  const double z = 0.5 * (a + b);
  ZetaSearch r;
  if (eval(z).ee >= bv) r.zeta = z;
  else r.zeta = bz;
  r.ee = eval(r.zeta);
  return r;
}

}  // namespace eeplan
