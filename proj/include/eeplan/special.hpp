#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "eeplan/errors.hpp"

namespace eeplan {

namespace detail {

template <typename T>
T lower_gamma_series(T s, T x) {
  if (x == T(0)) return T(0);
  T term = T(1) / s;
  T sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) <= std::abs(sum) * std::numeric_limits<T>::epsilon()) break;
  }
  return sum * std::exp(-x + s * std::log(x));
}

// Modified Lentz evaluation of the Legendre continued fraction.
template <typename T>
T upper_gamma_cf(T s, T x) {
  if (std::isinf(x)) return T(0);
  const T tiny = std::numeric_limits<T>::min() / std::numeric_limits<T>::epsilon();
  T b = x + T(1) - s;
  T c = T(1) / tiny;
  T d = T(1) / b;
  T h = d;
  for (int i = 1; i < 100000; ++i) {
    const T an = -T(i) * (T(i) - s);
    b += T(2);
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = T(1) / d;
    const T delta = d * c;
    h *= delta;
    if (std::abs(delta - T(1)) <= std::numeric_limits<T>::epsilon()) break;
  }
  return std::exp(-x + s * std::log(x)) * h;
}

}  // namespace detail

/// \brief Upper incomplete gamma function Gamma(s; x), unregularized.
/// \param s shape, strictly positive
/// \param x lower integration limit, non-negative (may be +inf)
template <typename T>
T upper_incomplete_gamma(T s, T x) {
  if (!(s > T(0))) throw domain_error("upper_incomplete_gamma: s must be positive");
  if (!(x >= T(0))) throw domain_error("upper_incomplete_gamma: x must be non-negative");
  if (std::isinf(x)) return T(0);
  if (x < s + T(1)) return std::tgamma(s) - detail::lower_gamma_series(s, x);
  return detail::upper_gamma_cf(s, x);
}

/// \brief Gamma(s; a) - Gamma(s; b) for 0 <= a <= b <= inf.
///
/// Picks the representation that avoids cancellation when both limits are
/// small, which matters for thin near-field rings.
template <typename T>
T gamma_interval(T s, T a, T b) {
  if (!(s > T(0))) throw domain_error("gamma_interval: s must be positive");
  if (!(a >= T(0) && b >= a)) throw domain_error("gamma_interval: need 0 <= a <= b");
  if (a == b) return T(0);
  if (b < s + T(1)) return detail::lower_gamma_series(s, b) - detail::lower_gamma_series(s, a);
  if (a >= s + T(1)) return detail::upper_gamma_cf(s, a) - upper_incomplete_gamma(s, b);
  return std::tgamma(s) - detail::lower_gamma_series(s, a) - upper_incomplete_gamma(s, b);
}

/// Exponential integral E1(x) for x > 0: power series below 1, modified
/// Lentz continued fraction above.
template <typename T>
T expint_e1(T x) {
  if (!(x > T(0))) throw domain_error("expint_e1: x must be positive");
  if (std::isinf(x)) return T(0);
  const T eps = std::numeric_limits<T>::epsilon();
  if (x <= T(1)) {
    T sum = T(0);
    T term = T(1);
    for (int k = 1; k < 1000; ++k) {
      term *= -x / T(k);
      const T add = -term / T(k);
      sum += add;
      if (std::abs(add) < eps * std::abs(sum)) break;
    }
    return -std::numbers::egamma_v<T> - std::log(x) + sum;
  }
  const T tiny = std::numeric_limits<T>::min() / eps;
  T b = x + T(1);
  T c = T(1) / tiny;
  T d = T(1) / b;
  T h = d;
  for (int i = 1; i < 1000; ++i) {
    const T a = -T(i) * T(i);
    b += T(2);
    d = T(1) / (a * d + b);
    c = b + a / c;
    const T del = c * d;
    h *= del;
    if (std::abs(del - T(1)) < eps) break;
  }
  return h * std::exp(-x);
}

/// \brief Antiderivative of t*ln(t)*exp(-t), with F(+inf) = 0.
///
/// F(0) is the limit gamma_E - 1.
template <typename T>
T t_log_t_exp_antiderivative(T t) {
  if (t == T(0)) return std::numbers::egamma_v<T> - T(1);
  if (std::isinf(t)) return T(0);
  return -(t + T(1)) * std::exp(-t) * std::log(t) - std::exp(-t) - expint_e1(t);
}

}  // namespace eeplan
