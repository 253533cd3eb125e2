#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace eeplan {

/// Dense real polynomial, coefficients in ascending powers.
template <typename T>
struct polynomial {
  std::vector<T> c;

  polynomial() = default;
  polynomial(std::initializer_list<T> coeffs) : c(coeffs) {}
  explicit polynomial(std::vector<T> coeffs) : c(std::move(coeffs)) {}

  int degree() const { return static_cast<int>(c.size()) - 1; }

  T operator()(T x) const {
    T acc = T(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  polynomial derivative() const {
    if (c.size() <= 1) return polynomial{T(0)};
    std::vector<T> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * T(i);
    return polynomial(std::move(d));
  }

  friend polynomial operator+(const polynomial& a, const polynomial& b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return polynomial(std::move(r));
  }
  friend polynomial operator-(const polynomial& a, const polynomial& b) {
    return a + b * polynomial{T(-1)};
  }
  friend polynomial operator*(const polynomial& a, const polynomial& b) {
    if (a.c.empty() || b.c.empty()) return polynomial{};
    std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return polynomial(std::move(r));
  }
};

/// \brief Real roots via companion-matrix eigenvalues plus Newton polish.
///
/// Leading coefficients below `rel_tol` times the largest magnitude are
/// trimmed. A root counts as real when |imag| < 1e-8 * max(1, |real|).
template <typename T>
std::vector<T> real_roots(const polynomial<T>& p, T rel_tol = T(1e-14)) {
  std::vector<T> c = p.c;
  T scale = T(0);
  for (T v : c) scale = std::max(scale, std::abs(v));
  if (scale == T(0)) return {};
  while (!c.empty() && std::abs(c.back()) <= rel_tol * scale) c.pop_back();
  std::vector<T> roots;
  // Factor out roots at zero.
  std::size_t lead_zeros = 0;
  while (lead_zeros < c.size() && c[lead_zeros] == T(0)) ++lead_zeros;
  if (lead_zeros > 0) roots.push_back(T(0));
  c.erase(c.begin(), c.begin() + static_cast<long>(lead_zeros));
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return roots;

  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  Mat comp = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = T(1);
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::EigenSolver<Mat> es(comp, false);
  const auto ev = es.eigenvalues();

  polynomial<T> q(c);
  const polynomial<T> dq = q.derivative();
  for (int i = 0; i < n; ++i) {
    const std::complex<T> z = ev(i);
    if (std::abs(z.imag()) >= T(1e-8) * std::max(T(1), std::abs(z.real()))) continue;
    T x = z.real();
    for (int it = 0; it < 8; ++it) {
      const T d = dq(x);
      if (d == T(0)) break;
      const T step = q(x) / d;
      if (!std::isfinite(step)) break;
      x -= step;
      if (std::abs(step) <= std::numeric_limits<T>::epsilon() * std::max(T(1), std::abs(x))) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace eeplan
