#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace eeplan {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stable seed derivation from a master seed, a stream name and indices.
template <typename... Idx>
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view stream, Idx... idx) {
  std::uint64_t h = splitmix64(master ^ fnv1a(stream));
  ((h = splitmix64(h ^ static_cast<std::uint64_t>(idx))), ...);
  return h;
}

using engine = std::mt19937_64;

/// Circularly-symmetric complex Gaussian with the given variance.
class complex_normal {
 public:
  explicit complex_normal(double variance = 1.0) : sd_(std::sqrt(variance / 2.0)) {}
  template <typename G>
  std::complex<double> operator()(G& g) {
    const double re = n_(g);
    const double im = n_(g);
    return {sd_ * re, sd_ * im};
  }

 private:
  double sd_;
  std::normal_distribution<double> n_{0.0, 1.0};
};

}  // namespace eeplan
