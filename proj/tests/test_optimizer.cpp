#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eeplan/moments.hpp"
#include "eeplan/optimizer.hpp"

using namespace eeplan;

namespace {

// Moments back-fitted so that the closed-form bound reproduces the
// reference optimum; used to check the optimizer independently of geometry.
OptimizationProblem fitted_problem(double gamma) {
  OptimizationProblem pr;
  pr.lambda = 10.0;
  pr.gamma = gamma;
  pr.moments.mu1 = 1.375;
  pr.moments.mu2 = 0.702;
  pr.moments.U = 0.0085;
  return pr;
}

OptimizationProblem continuity_problem(double gamma) {
  OptimizationProblem pr;
  pr.lambda = 10.0;
  pr.gamma = gamma;
  pr.moments = compute_moments(default_pathloss(InterceptMode::continuity), 10.0, pr.config);
  return pr;
}

double relaxed_ee(const OptimizationProblem& pr, double cbar, double K) {
  const double M = cbar * K;
  return design_ee(pr, Scheme::zf, optimal_zeta(M, K, pr.gamma, pr).zeta, M, K).ee;
}

}  // namespace

TEST(Cbar, InteriorOptimumIsStationary) {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int interior = 0;
  for (int i = 0; i < 400 && interior < 100; ++i) {
    OptimizationProblem pr;
    pr.lambda = 1 + 50 * u(g);
    pr.gamma = 0.5 + 7 * u(g);
    pr.moments.mu1 = 0.2 + 2.5 * u(g);
    pr.moments.mu2 = 0.05 + 1.5 * u(g);
    pr.moments.U = 0.001 + 2 * u(g);
    const double K = 1 + std::floor(20 * u(g));
    CbarResult c;
    try {
      c = optimal_cbar(K, pr);
    } catch (const infeasible_error&) {
      continue;
    }
    if (!(c.cbar0 > c.cbar1 * (1 + 1e-3) && c.cbar0 < c.cbar2 * (1 - 1e-3))) continue;
    const double h = 1e-5 * c.cbar;
    const double d = (relaxed_ee(pr, c.cbar + h, K) - relaxed_ee(pr, c.cbar - h, K)) / (2 * h);
    const double ee = relaxed_ee(pr, c.cbar, K);
    EXPECT_LT(std::abs(d) * c.cbar, 1e-6 * ee);
    ++interior;
  }
  EXPECT_GE(interior, 50);
}

TEST(Cbar, GrowsWithTarget) {
  double prev = 0.0;
  for (double g : {1.0, 2.0, 3.0, 5.0, 7.0}) {
    const double c = optimal_cbar(6, fitted_problem(g)).cbar0;
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(Cbar, RoundsToReferenceAntennaCount) {
  EXPECT_EQ(std::lround(6 * optimal_cbar(6, fitted_problem(3)).cbar), 53);
}

TEST(KStep, MatchesFineGrid) {
  for (double g : {1.0, 3.0, 7.0})
    for (double cbar : {6.0, 9.0, 20.0}) {
      const auto pr = fitted_problem(g);
      KResult r;
      try {
        r = optimal_K(cbar, pr);
      } catch (const infeasible_error&) {
        continue;
      }
      double best = -1, bestK = 0;
      for (double K = r.lo; K <= r.hi; K += 1e-3) {
        double v;
        try {
          v = relaxed_ee(pr, cbar, K);
        } catch (const std::exception&) {
          continue;
        }
        if (v > best) best = v, bestK = K;
      }
      EXPECT_NEAR(r.K, bestK, 1e-2) << "gamma=" << g << " cbar=" << cbar;
    }
}

TEST(KStep, AsymptoticScalesAsInverseRoot) {
  const auto pr = fitted_problem(3);
  const double c1 = 2000, c2 = 20000;
  const double k1 = optimal_K(c1, pr, KMode::asymptotic).K;
  const double k2 = optimal_K(c2, pr, KMode::asymptotic).K;
  const double slope = std::log(k2 / k1) / std::log(c2 / c1);
  EXPECT_NEAR(slope, -0.5, 0.05);
  EXPECT_GT(k1, k2);
}

TEST(Alternating, ReproducesReferenceDesignWithFittedMoments) {
  struct Row {
    double gamma;
    int M, K;
    double zeta, ee, apc;
  };
  for (const Row& row : {Row{1, 53, 13, 3.4, 3.81, 176}, Row{3, 53, 6, 8.02, 3.66, 166}, Row{7, 56, 3, 16.34, 2.71, 167}}) {
    const auto r = alternating_optimize(fitted_problem(row.gamma), {1.0, 60.0, 5.0});
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.point.M, row.M, 1.0) << row.gamma;
    EXPECT_NEAR(r.point.K, row.K, 1.0) << row.gamma;
    EXPECT_NEAR(r.ee.ee / 1e6, row.ee, 0.05 * row.ee) << row.gamma;
    EXPECT_NEAR(r.ee.apc, row.apc, 0.05 * row.apc) << row.gamma;
  }
}

TEST(Alternating, TraceIsNonDecreasingAndIdempotent) {
  for (auto pr : {fitted_problem(3), continuity_problem(3)}) {
    const auto r = alternating_optimize(pr, {1.0, 60.0, 5.0});
    double last = -1;
    for (const auto& t : r.trace) {
      EXPECT_GE(t.ee_after_cbar, last * (1 - 1e-9));
      EXPECT_GE(t.ee_after_K, t.ee_after_cbar * (1 - 1e-9));
      last = t.ee_after_K;
    }
    const auto again = alternating_optimize(pr, r.relaxed);
    EXPECT_EQ(again.iterations, 1);
    EXPECT_EQ(again.point.M, r.point.M);
    EXPECT_EQ(again.point.K, r.point.K);
    EXPECT_NEAR(again.ee.ee, r.ee.ee, 1e-9 * r.ee.ee);
  }
}

TEST(Alternating, ReportsInfeasibility) {
  OptimizationProblem pr;
  pr.gamma = 3;
  pr.moments = compute_moments(default_pathloss(InterceptMode::literal), 10.0, pr.config);
  EXPECT_THROW(alternating_optimize(pr, {1.0, 60.0, 5.0}), infeasible_error);
  EXPECT_THROW(alternating_optimize(fitted_problem(3), {1.0, 3.0, 5.0}), domain_error);
}

TEST(Grid, AgreesWithAlternatingOnFittedMoments) {
  const auto pr = fitted_problem(3);
  const auto grid = grid_search(pr, 2, 120, 1, 30, Scheme::zf);
  const auto alt = alternating_optimize(pr, {1.0, 60.0, 5.0});
  EXPECT_NEAR(alt.ee.ee, grid.best.ee.ee, 0.005 * grid.best.ee.ee);
  std::vector<double> along_M, along_K;
  for (int M = 2; M <= 120; ++M) along_M.push_back(grid.at(M, grid.best.K).feasible ? grid.at(M, grid.best.K).ee.ee : NAN);
  for (int K = 1; K <= 30; ++K) along_K.push_back(grid.at(grid.best.M, K).feasible ? grid.at(grid.best.M, K).ee.ee : NAN);
  EXPECT_TRUE(is_unimodal(along_M));
  EXPECT_TRUE(is_unimodal(along_K));
}

TEST(Grid, MaskHasReasonsAndFeasibleCellsRespectConstraints) {
  const auto grid = grid_search(continuity_problem(3), 2, 60, 1, 30, Scheme::zf);
  int masked = 0;
  for (const auto& c : grid.cells) {
    if (c.feasible) {
      EXPECT_GE(c.zeta, 1.0);
      EXPECT_LT(c.zeta * c.K, 200.0);
      EXPECT_TRUE(c.reason.empty());
    } else {
      ++masked;
      EXPECT_FALSE(c.reason.empty());
    }
  }
  EXPECT_GT(masked, 0);
  EXPECT_EQ(grid.at(5, 5).reason, "M<=K");
}

TEST(Grid, MrRowsWithFittedMoments) {
  struct Row {
    double gamma;
    int M, K;
    double ee;
  };
  for (const Row& row : {Row{1, 52, 12, 3.58}, Row{3, 58, 5, 2.96}, Row{7, 82, 3, 2.03}}) {
    const auto g = grid_search(fitted_problem(row.gamma), 2, 300, 1, 40, Scheme::mr);
    EXPECT_NEAR(g.best.M, row.M, 2) << row.gamma;
    EXPECT_NEAR(g.best.K, row.K, 2) << row.gamma;
    EXPECT_NEAR(g.best.ee.ee / 1e6, row.ee, 0.07 * row.ee) << row.gamma;
  }
}

TEST(Unimodal, Classifier) {
  EXPECT_TRUE(is_unimodal({1, 2, 3, 2, 1}));
  EXPECT_FALSE(is_unimodal({1, 3.09, 1, 3.1, 1}));
  EXPECT_TRUE(is_unimodal({1, 2, 1, 3, 1}));           // side peak below 99.5 %
  EXPECT_FALSE(is_unimodal({1, 2, 1, 3, 1}, 0.0));     // strict
  EXPECT_TRUE(is_unimodal({NAN, 1, 2, NAN, 3, 2}, 0.0));
}

TEST(ZetaSearch, BeatsAnyGridPoint) {
  const auto pr = continuity_problem(1);
  const auto r = best_zeta_closed(Scheme::zf, 100, 10, pr);
  for (double z = 1; z < 20; z += 0.37) {
    const auto b = sinr_bound(Scheme::zf, {z, 100, 10}, pr);
    EXPECT_GE(r.ee.ee, evaluate_design(Scheme::zf, 10, z, 100, 10, b.se, pr.moments.U, pr.config).ee * (1 - 1e-12));
  }
}
