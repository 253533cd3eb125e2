#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "eeplan/channel.hpp"
#include "eeplan/errors.hpp"
#include "eeplan/geometry.hpp"

namespace eeplan {

enum class Bound { theorem1, uatf };

inline std::string_view to_string(Bound b) { return b == Bound::theorem1 ? "t1" : "uatf"; }

struct McConfig {
  double lambda = 10.0;
  int M = 100;
  int K = 10;
  double side = 1.0;  // km
  int n_dep = 200;
  int n_draws = 50;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SeEstimate {
  double mean = 0.0;    // bit/s/Hz per UE, pre-log included
  double stderr_ = 0.0;
  double uatf_bias = 0.0;  // mean relative upward bias of the UatF signal term
  int n_dep = 0;
  int n_ch = 0;
};

struct SweepResult {
  std::vector<double> zetas;
  std::vector<Scheme> schemes;
  std::vector<std::array<SeEstimate, 2>> est;  // [zeta][scheme] flattened, then bound

  const SeEstimate& at(std::size_t zi, std::size_t si, Bound b) const {
    return est[zi * schemes.size() + si][b == Bound::theorem1 ? 0 : 1];
  }
};

namespace detail {

struct DeploymentStats {
  // per (zeta, scheme)
  std::vector<double> t1;                 // mean log2(1+SINR') over draws and UEs
  std::vector<std::vector<double>> t1_draw;  // per draw, for single-deployment runs
  std::vector<double> uatf;               // mean over UEs of log2(1+SINR_uatf)
  std::vector<std::vector<double>> uatf_ue;
  std::vector<double> bias;
};

template <typename F>
void parallel_for(int n, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(m);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

inline DeploymentStats run_deployment(const McConfig& mc, int d, const std::vector<double>& zetas,
                                      const std::vector<Scheme>& schemes, const PathLossModel& m,
                                      const SystemConfig& c) {
  const std::uint64_t dseed = derive_seed(mc.seed, "deployment", static_cast<std::uint64_t>(d));
  const Deployment dep = sample_deployment(mc.lambda, mc.side, mc.K, dseed);
  const int j = dep.typical_cell;
  const int K = mc.K;
  const std::size_t nz = zetas.size();
  const std::size_t ns = schemes.size();
  const std::size_t nc = nz * ns;

  DeploymentStats st;
  st.t1.assign(nc, 0.0);
  st.t1_draw.assign(nc, {});
  st.uatf.assign(nc, 0.0);
  st.uatf_ue.assign(nc, {});
  st.bias.assign(nc, 0.0);
  std::vector<std::vector<std::complex<double>>> sum_s(nc, std::vector<std::complex<double>>(K));
  std::vector<std::vector<double>> sum_s2(nc, std::vector<double>(K)), sum_int(nc, std::vector<double>(K)),
      sum_norm(nc, std::vector<double>(K));

  for (int r = 0; r < mc.n_draws; ++r) {
    const std::uint64_t rseed = derive_seed(dseed, "draw", static_cast<std::uint64_t>(r));
    auto R = draw_channels(dep, m, c, mc.M, rseed, {j});
    const auto& o = R.obs[0];
    std::vector<double> q(R.p.size());
    for (std::size_t u = 0; u < q.size(); ++u) q[u] = R.p[u] / c.sigma2;
    for (std::size_t zi = 0; zi < nz; ++zi) {
      const auto alloc = allocate_pilots(R.L, K, zetas[zi], derive_seed(rseed, "allocation"));
      apply_pilots(R, alloc, c, derive_seed(rseed, "estimation", zi));
      for (std::size_t si = 0; si < ns; ++si) {
        const std::size_t ci = zi * ns + si;
        const cmat V = combine(schemes[si], R, o, c);
        const auto sinr = instantaneous_sinr(V, R, o, c);
        double acc = 0.0;
        for (double s : sinr) acc += std::log2(1.0 + s);
        st.t1[ci] += acc / K;
        st.t1_draw[ci].push_back(acc / K);
        const cmat G = V.adjoint() * o.H;  // K x U
        for (int k = 0; k < K; ++k) {
          const auto s = G(k, R.ue(j, k));
          sum_s[ci][k] += s;
          sum_s2[ci][k] += std::norm(s);
          double tot = 0.0;
          for (int u = 0; u < G.cols(); ++u) tot += q[u] * std::norm(G(k, u));
          sum_int[ci][k] += tot;
          sum_norm[ci][k] += V.col(k).squaredNorm();
        }
      }
    }
  }
  const double n = mc.n_draws;
  for (std::size_t ci = 0; ci < nc; ++ci) {
    st.t1[ci] /= n;
    double acc = 0.0;
    double bias = 0.0;
    for (int k = 0; k < K; ++k) {
      const double qk = c.P0() / pathloss(dep.distance(j, k, j), m) / c.sigma2;
      const auto es = sum_s[ci][k] / n;
      const double sig = qk * std::norm(es);
      const double den = sum_int[ci][k] / n - sig + sum_norm[ci][k] / n;
      const double val = std::log2(1.0 + sig / den);
      st.uatf_ue[ci].push_back(val);
      acc += val;
      const double var = sum_s2[ci][k] / n - std::norm(es);
      if (n > 1 && std::norm(es) > 0.0) bias += var / (n - 1.0) / std::norm(es);
    }
    st.uatf[ci] = acc / K;
    st.bias[ci] = bias / K;
  }
  return st;
}

}  // namespace detail

inline double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = sample_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

/// \brief Monte Carlo SE for several pilot reuse factors and schemes at once.
///
/// Geometry and true channels are shared by every (zeta, scheme) pair, so
/// differences across the sweep are not masked by independent noise. The
/// typical cell of each deployment (the one covering a uniform reference
/// point) is evaluated. Standard errors are taken across deployments; with a
/// single deployment they are taken across channel draws (t1) or
/// across UEs (UatF).
inline SweepResult mc_sweep(const McConfig& mc, const std::vector<double>& zetas,
                            const std::vector<Scheme>& schemes, const PathLossModel& m,
                            const SystemConfig& c) {
  c.validate();
  m.validate();
  require(mc.n_dep >= 1 && mc.n_draws >= 1, "mc_sweep: budgets must be positive");
  require(!zetas.empty() && !schemes.empty(), "mc_sweep: empty sweep");
  for (double z : zetas) {
    require(z >= 1.0, "mc_sweep: zeta must be at least 1");
    require(z * mc.K < c.tau_c, "mc_sweep: pilot length must be shorter than the coherence block");
  }
  for (Scheme s : schemes)
    if (s == Scheme::zf) require(mc.M > mc.K, "mc_sweep: ZF needs M > K");

  std::vector<detail::DeploymentStats> stats(static_cast<std::size_t>(mc.n_dep));
  detail::parallel_for(mc.n_dep, mc.threads, [&](int d) {
    stats[static_cast<std::size_t>(d)] = detail::run_deployment(mc, d, zetas, schemes, m, c);
  });

  SweepResult out;
  out.zetas = zetas;
  out.schemes = schemes;
  const std::size_t ns = schemes.size();
  out.est.resize(zetas.size() * ns);
  for (std::size_t zi = 0; zi < zetas.size(); ++zi) {
    const double pl = c.xi * (1.0 - zetas[zi] * mc.K / c.tau_c);
    for (std::size_t si = 0; si < ns; ++si) {
      const std::size_t ci = zi * ns + si;
      std::vector<double> t1, ua;
      double bias = 0.0;
      for (const auto& st : stats) {
        t1.push_back(st.t1[ci]);
        ua.push_back(st.uatf[ci]);
        bias += st.bias[ci];
      }
      auto& e = out.est[ci];
      for (auto& x : e) {
        x.n_dep = mc.n_dep;
        x.n_ch = mc.n_draws;
      }
      e[0].mean = pl * sample_mean(t1);
      e[1].mean = pl * sample_mean(ua);
      if (mc.n_dep >= 2) {
        e[0].stderr_ = pl * standard_error(t1);
        e[1].stderr_ = pl * standard_error(ua);
      } else {
        e[0].stderr_ = pl * standard_error(stats[0].t1_draw[ci]);
        e[1].stderr_ = pl * standard_error(stats[0].uatf_ue[ci]);
      }
      e[1].uatf_bias = bias / mc.n_dep;
    }
  }
  return out;
}

/// Monte Carlo SE for one scheme, bound and pilot reuse factor.
inline SeEstimate average_se(Scheme s, Bound b, const McConfig& mc, double zeta, const PathLossModel& m,
                             const SystemConfig& c) {
  const auto r = mc_sweep(mc, {zeta}, {s}, m, c);
  return r.at(0, 0, b);
}

}  // namespace eeplan
