#pragma once

#include <cmath>

#include "eeplan/errors.hpp"

namespace eeplan {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Radio and hardware constants. Defaults are the reference values used
/// throughout the tests and the CLI.
struct SystemConfig {
  // radio
  double tau_c = 200.0;                    // samples per coherence block
  double B_w = 20e6;                       // Hz
  double xi = 1.0 / 3.0;                   // UL fraction of the payload
  double sigma2 = dbm_to_watts(-94.0);     // W
  double SNR0 = db_to_linear(5.0);         // payload SNR, linear
  double SNRp = db_to_linear(15.0);        // pilot SNR, linear
  double area_km2 = 1.0;
  // hardware
  double P_FIX = 5.0;      // W
  double P_LO = 0.1;       // W
  double P_BS = 0.2;       // W per antenna
  double P_UE = 0.1;       // W per UE
  double P_COD = 0.01;     // W/(Gbit/s)
  double P_DEC = 0.08;     // W/(Gbit/s)
  double P_BT = 0.025;     // W/(Gbit/s)
  double L_BS = 750e9;     // flops/W
  double eta = 0.5;

  double rho() const { return SNRp / SNR0; }
  double P0() const { return sigma2 * SNR0; }
  double Pp() const { return rho() * P0(); }
  /// Backhaul/coding/decoding cost in W per bit/s.
  double A_per_bps() const { return (P_COD + P_DEC + P_BT) * 1e-9; }
  /// Common 3 B_w / (tau_c L_BS) factor of the signal-processing terms.
  double lp_factor() const { return 3.0 * B_w / (tau_c * L_BS); }

  void validate() const {
    require(tau_c >= 2.0, "tau_c must be at least 2");
    require(B_w > 0.0, "B_w must be positive");
    require(xi > 0.0 && xi <= 1.0, "xi must lie in (0,1]");
    require(eta > 0.0 && eta <= 1.0, "eta must lie in (0,1]");
    require(sigma2 > 0.0 && SNR0 > 0.0 && SNRp > 0.0, "noise and SNRs must be positive");
    require(rho() >= 1.0, "SNRp must not be below SNR0");
    require(P_FIX >= 0 && P_LO >= 0 && P_BS >= 0 && P_UE >= 0 && P_COD >= 0 && P_DEC >= 0 &&
                P_BT >= 0,
            "hardware powers must be non-negative");
    require(L_BS > 0.0, "L_BS must be positive");
    require(area_km2 > 0.0, "area must be positive");
  }
};

}  // namespace eeplan
