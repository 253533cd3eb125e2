#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "eeplan/errors.hpp"
#include "eeplan/rng.hpp"

namespace eeplan {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Minimum-image distance on a square torus of the given side.
inline double torus_distance(const Point& a, const Point& b, double side) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  dx = std::min(dx, side - dx);
  dy = std::min(dy, side - dy);
  return std::hypot(dx, dy);
}

/// One PPP realization. UE i of cell l sits at ue[l][i] and is served by BS l.
struct Deployment {
  double side = 1.0;
  double lambda = 0.0;
  int K = 0;
  std::vector<Point> bs;
  std::vector<std::vector<Point>> ue;
  Point reference{};     // uniform point used to pick the typical cell
  int typical_cell = 0;  // cell whose area covers `reference`

  int cells() const { return static_cast<int>(bs.size()); }

  int nearest_bs(const Point& p) const {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int l = 0; l < cells(); ++l) {
      const double d = torus_distance(p, bs[l], side);
      if (d < bd) {
        bd = d;
        best = l;
      }
    }
    return best;
  }

  /// Distance (km) from UE (l,i) to BS j.
  double distance(int l, int i, int j) const { return torus_distance(ue[l][i], bs[j], side); }
};

/// \brief Draw a deployment: Poisson BS count on side^2, UEs uniform in
/// their toroidal Voronoi cells via rejection sampling.
inline Deployment sample_deployment(double lambda, double side, int K, std::uint64_t seed) {
  require(lambda > 0.0, "sample_deployment: lambda must be positive");
  require(side > 0.0, "sample_deployment: side must be positive");
  require(K >= 1, "sample_deployment: K must be at least 1");
  engine g(derive_seed(seed, "positions"));
  std::uniform_real_distribution<double> u(0.0, side);
  std::poisson_distribution<long> count(lambda * side * side);

  Deployment d;
  d.side = side;
  d.lambda = lambda;
  d.K = K;
  long L = 0;
  while (L == 0) L = count(g);
  d.bs.resize(static_cast<std::size_t>(L));
  for (auto& p : d.bs) p = {u(g), u(g)};
  d.ue.assign(static_cast<std::size_t>(L), {});
  for (auto& cell : d.ue) cell.reserve(static_cast<std::size_t>(K));

  const double cap = 1e6 * lambda * K;
  long filled = 0;
  double draws = 0.0;
  while (filled < L) {
    if (++draws > cap) throw domain_error("sample_deployment: rejection cap exceeded");
    const Point p{u(g), u(g)};
    auto& cell = d.ue[static_cast<std::size_t>(d.nearest_bs(p))];
    if (static_cast<int>(cell.size()) < K) {
      cell.push_back(p);
      if (static_cast<int>(cell.size()) == K) ++filled;
    }
  }
  d.reference = {u(g), u(g)};
  d.typical_cell = d.nearest_bs(d.reference);
  return d;
}

}  // namespace eeplan
