#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "eeplan/errors.hpp"

namespace eeplan {

enum class InterceptMode { literal, continuity };

/// \brief N-slope distance decay law: beta(d) = upsilon[n] * d^-alpha[n]
/// on ring n = [R_{n-1}, R_n), with R_0 = 0 and R_N = inf. Distances in km.
struct PathLossModel {
  std::vector<double> breakpoints;  // R_1 .. R_{N-1}
  std::vector<double> alpha;        // alpha_1 .. alpha_N
  std::vector<double> upsilon;      // linear intercepts
  InterceptMode mode = InterceptMode::literal;

  std::size_t slopes() const { return alpha.size(); }
  double inner(std::size_t n) const { return n == 0 ? 0.0 : breakpoints[n - 1]; }
  double outer(std::size_t n) const {
    return n + 1 == slopes() ? std::numeric_limits<double>::infinity() : breakpoints[n];
  }

  void validate() const {
    require(!alpha.empty(), "path loss model needs at least one slope");
    require(breakpoints.size() + 1 == alpha.size() && upsilon.size() == alpha.size(),
            "path loss model: inconsistent slope/breakpoint counts");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      require(breakpoints[i] > 0.0 && std::isfinite(breakpoints[i]), "breakpoints must be positive");
      if (i > 0) require(breakpoints[i] > breakpoints[i - 1], "breakpoints must increase");
    }
    for (std::size_t n = 0; n < alpha.size(); ++n) {
      require(alpha[n] >= 0.0, "exponents must be non-negative");
      if (n > 0) require(alpha[n] >= alpha[n - 1], "exponents must be non-decreasing");
      require(upsilon[n] > 0.0, "intercepts must be positive");
    }
    require(alpha.back() > 2.0, "far-field exponent must exceed 2");
  }

  /// Stable identity string used to tag moment sets and CSV rows.
  std::string fingerprint() const {
    std::string s = mode == InterceptMode::literal ? "literal" : "continuity";
    char buf[64];
    for (std::size_t n = 0; n < slopes(); ++n) {
      std::snprintf(buf, sizeof buf, "|a%.17g,u%.17g", alpha[n], upsilon[n]);
      s += buf;
      if (n + 1 < slopes()) {
        std::snprintf(buf, sizeof buf, ",r%.17g", breakpoints[n]);
        s += buf;
      }
    }
    return s;
  }
};

/// \brief Build a model from exponents, breakpoints (km) and the linear
/// intercept of the last slope.
///
/// Literal mode uses unit intercepts on every ring but the last. Continuity
/// mode back-propagates intercepts so that beta is continuous.
inline PathLossModel make_pathloss_model(std::vector<double> alpha, std::vector<double> breakpoints_km,
                                         double far_intercept, InterceptMode mode) {
  PathLossModel m;
  m.alpha = std::move(alpha);
  m.breakpoints = std::move(breakpoints_km);
  m.mode = mode;
  m.upsilon.assign(m.alpha.size(), 1.0);
  require(!m.alpha.empty(), "path loss model needs at least one slope");
  m.upsilon.back() = far_intercept;
  if (mode == InterceptMode::continuity) {
    for (std::size_t n = m.alpha.size() - 1; n-- > 0;) {
      m.upsilon[n] = m.upsilon[n + 1] * std::pow(m.breakpoints[n], m.alpha[n] - m.alpha[n + 1]);
    }
  }
  m.validate();
  return m;
}

inline constexpr double kFarInterceptDb = -148.1;

/// Three-slope reference model: exponents (0,2,4), breakpoints 10 m and 446 m.
inline PathLossModel default_pathloss(InterceptMode mode = InterceptMode::literal) {
  return make_pathloss_model({0.0, 2.0, 4.0}, {0.010, 0.446}, std::pow(10.0, kFarInterceptDb / 10.0), mode);
}

inline PathLossModel single_slope(double alpha, double upsilon = std::pow(10.0, kFarInterceptDb / 10.0)) {
  return make_pathloss_model({alpha}, {}, upsilon, InterceptMode::literal);
}

/// Linear gain at distance d (km).
inline double pathloss(double d, const PathLossModel& m) {
  if (!(d > 0.0)) throw domain_error("pathloss: distance must be positive");
  const auto it = std::upper_bound(m.breakpoints.begin(), m.breakpoints.end(), d);
  const std::size_t n = static_cast<std::size_t>(it - m.breakpoints.begin());
  return m.upsilon[n] * std::pow(d, -m.alpha[n]);
}

}  // namespace eeplan
