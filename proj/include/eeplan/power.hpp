#pragma once

#include <string>
#include <string_view>

#include "eeplan/errors.hpp"
#include "eeplan/system_config.hpp"

namespace eeplan {

enum class Scheme { mr, zf, mmse };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::mr: return "mr";
    case Scheme::zf: return "zf";
    case Scheme::mmse: return "mmse";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view s) {
  if (s == "mr") return Scheme::mr;
  if (s == "zf") return Scheme::zf;
  if (s == "mmse" || s == "m-mmse") return Scheme::mmse;
  throw domain_error("unknown combining scheme: " + std::string(s));
}

/// Circuit power of one BS, split into its sub-terms (W).
struct CircuitPower {
  double fix = 0.0;
  double tc = 0.0;   // transceiver chains
  double cbh = 0.0;  // coding, decoding, backhaul
  double ce = 0.0;   // channel estimation
  double lpr = 0.0;  // reception of payload
  double lpc = 0.0;  // combiner computation
  double total() const { return fix + tc + cbh + ce + lpr + lpc; }
};

struct EEBreakdown {
  double se = 0.0;    // bit/s/Hz per UE
  double ase = 0.0;   // bit/s/Hz/km^2
  double p_tx = 0.0;  // W per cell
  CircuitPower p_cp;
  double apc = 0.0;   // W/km^2
  double ee = 0.0;    // bit/J
  double throughput_mbps_per_km2(const SystemConfig& c) const { return c.B_w * ase / 1e6; }
};

/// Payload samples per block for pilot length zeta*K.
inline double uplink_samples(const SystemConfig& c, double zeta, double K) {
  const double tau_u = c.xi * (c.tau_c - zeta * K);
  if (tau_u < 0.0) throw domain_error("pilot length exceeds the coherence block");
  return tau_u;
}

/// Average radiated power per cell (W) given the mean per-UE power U.
inline double transmit_power(const SystemConfig& c, double zeta, double K, double U) {
  const double tau_u = uplink_samples(c, zeta, K);
  const double tau_p = zeta * K;
  return (tau_u + c.rho() * tau_p) / c.tau_c * K * U;
}

/// Combiner computation cost in W for one BS.
inline double combiner_power(Scheme s, double M, double K, double zeta, const SystemConfig& c,
                             double lambda) {
  const double f = c.lp_factor();
  switch (s) {
    case Scheme::mr: return f * (7.0 / 3.0) * K;
    case Scheme::zf:
      return f * (1.5 * K * K * M + 0.5 * K * M + (K * K * K - K) / 3.0 + 7.0 / 3.0 * K);
    case Scheme::mmse:
      return f * (lambda * c.area_km2 * (M * M + 3.0 * M) * K / 2.0 + (M * M - M) * K +
                  M * M * M / 3.0 + 2.0 * M + M * zeta * K * K * (zeta - 1.0));
  }
  throw domain_error("unknown combining scheme");
}

inline CircuitPower circuit_power(Scheme s, double M, double K, double zeta, double se,
                                  const SystemConfig& c, double lambda) {
  require(M >= 1.0 && K >= 1.0, "circuit_power: M and K must be at least 1");
  const double tau_u = uplink_samples(c, zeta, K);
  const double f = c.lp_factor();
  CircuitPower p;
  p.fix = c.P_FIX;
  p.tc = M * c.P_BS + c.P_LO + K * c.P_UE;
  p.cbh = c.B_w * K * se * c.A_per_bps();
  p.ce = f * K * M * (zeta * K + 1.0);
  p.lpr = f * M * K * tau_u;
  p.lpc = combiner_power(s, M, K, zeta, c, lambda);
  return p;
}

inline EEBreakdown energy_efficiency(double lambda, double K, double se, double p_tx,
                                     const CircuitPower& p_cp, const SystemConfig& c) {
  EEBreakdown r;
  r.se = se;
  r.ase = lambda * K * se;
  r.p_tx = p_tx;
  r.p_cp = p_cp;
  r.apc = lambda * (p_tx / c.eta + p_cp.total());
  if (!(r.apc > 0.0)) throw domain_error("energy_efficiency: area power must be positive");
  r.ee = c.B_w * r.ase / r.apc;
  return r;
}

/// Convenience: full breakdown for a design point with a given SE.
inline EEBreakdown evaluate_design(Scheme s, double lambda, double zeta, double M, double K, double se,
                                   double U, const SystemConfig& c) {
  const double ptx = transmit_power(c, zeta, K, U);
  return energy_efficiency(lambda, K, se, ptx, circuit_power(s, M, K, zeta, se, c, lambda), c);
}

/// \brief Polynomial form of the ZF area power.
///
/// APC = lambda*(C0 + C1 K + zeta C2 K^2 + C3 K^3 + D0 M + D1 M K + D2 M K^2
///               + zeta E M K^2) + A * B_w * ASE.
/// The coefficients follow from the term-by-term model above. The E term
/// collects the pilot-length dependence of channel estimation and payload
/// reception.
struct ApcCoefficients {
  double C0, C1, C2, C3, D0, D1, D2, E, A;

  double apc(double lambda, double zeta, double M, double K, double ase, double B_w) const {
    return lambda * (C0 + C1 * K + zeta * C2 * K * K + C3 * K * K * K + D0 * M + D1 * M * K +
                     D2 * M * K * K + zeta * E * M * K * K) +
           A * B_w * ase;
  }
};

inline ApcCoefficients apc_zf_coefficients(const SystemConfig& c, double U) {
  const double f = c.lp_factor();
  ApcCoefficients k{};
  k.C0 = c.P_FIX + c.P_LO;
  k.C1 = c.P_UE + c.xi * U / c.eta + 2.0 * f;
  k.C2 = (c.rho() - c.xi) * U / (c.eta * c.tau_c);
  k.C3 = f / 3.0;
  k.D0 = c.P_BS;
  k.D1 = f * (1.5 + c.xi * c.tau_c);
  k.D2 = 1.5 * f;
  k.E = f * (1.0 - c.xi);
  k.A = c.A_per_bps();
  return k;
}

}  // namespace eeplan
