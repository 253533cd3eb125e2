#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "eeplan/errors.hpp"
#include "eeplan/geometry.hpp"
#include "eeplan/pathloss.hpp"
#include "eeplan/power.hpp"
#include "eeplan/rng.hpp"
#include "eeplan/system_config.hpp"

namespace eeplan {

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

/// \brief Pilot assignment by subset labels.
///
/// Each cell draws one of ceil(zeta) disjoint pilot subsets; two cells are
/// contaminated iff they drew the same subset, and UE i of either cell uses
/// the i-th sequence of it. The label law is chosen so that the pairwise
/// collision probability is exactly 1/zeta, also for non-integer zeta.
struct PilotAllocation {
  double zeta = 1.0;
  int K = 0;
  long groups = 1;
  std::vector<long> label;

  bool contaminated(int l, int m) const { return label[l] == label[m]; }
  double tau_p() const { return zeta * K; }
};

namespace detail {

// Law over n = ceil(zeta) labels: label 0 with probability a, others b.
struct LabelLaw {
  long n;
  double a;
  double b;
};

inline LabelLaw label_law(double zeta) {
  const double n = std::ceil(zeta);
  if (n == zeta) return {static_cast<long>(n), 1.0 / n, 1.0 / n};
  const double disc = 1.0 - n + n * (n - 1.0) / zeta;
  const double a = (1.0 + std::sqrt(std::max(0.0, disc))) / n;
  return {static_cast<long>(n), a, (1.0 - a) / (n - 1.0)};
}

inline long draw_label(const LabelLaw& law, double u) {
  if (law.n == 1) return 0;
  if (u < law.a) return 0;
  const long k = 1 + static_cast<long>((u - law.a) / law.b);
  return std::min(k, law.n - 1);
}

}  // namespace detail

inline PilotAllocation allocate_pilots(int cells, int K, double zeta, std::uint64_t seed) {
  require(zeta >= 1.0, "allocate_pilots: zeta must be at least 1");
  require(cells >= 1 && K >= 1, "allocate_pilots: need at least one cell and one UE");
  PilotAllocation a;
  a.zeta = zeta;
  a.K = K;
  const auto law = detail::label_law(zeta);
  a.groups = law.n;
  engine g(derive_seed(seed, "pilots"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  a.label.resize(static_cast<std::size_t>(cells));
  for (auto& lab : a.label) lab = detail::draw_label(law, u(g));
  return a;
}

inline PilotAllocation allocate_pilots(const Deployment& d, double zeta, std::uint64_t seed,
                                       double tau_c = 200.0) {
  require(zeta * d.K <= tau_c, "allocate_pilots: pilot length exceeds the coherence block");
  return allocate_pilots(d.cells(), d.K, zeta, seed);
}

/// Channels and estimates seen at one BS. Columns are indexed by l*K + i.
struct ObserverChannels {
  int bs = 0;
  cmat H;                     // true channels
  cmat Y;                     // de-spread pilot observations, one column per used sequence
  std::vector<int> column;    // UE -> column of Y
  std::vector<double> coef;   // estimate = coef * Y.col(column)
  std::vector<double> beta;   // large-scale gain to this BS
  std::vector<double> gamma;  // estimate variance per entry
  std::vector<double> seq_weight;  // sum of p * coef^2 over UEs sharing each column

  cvec estimate(int ue) const { return coef[ue] * Y.col(column[ue]); }
};

/// One draw of all channels relevant to the chosen observer BSs.
struct ChannelRealization {
  int M = 0;
  int K = 0;
  int L = 0;
  std::vector<double> p;  // W, statistical channel inversion
  std::vector<ObserverChannels> obs;

  int ue(int l, int i) const { return l * K + i; }
};

struct EstimationOptions {
  bool noiseless_pilots = false;  // drop the 1/SNRp term
};

/// \brief Draw true channels at the observer BSs. Pilot-independent, so a
/// single draw can be reused across pilot allocations.
inline ChannelRealization draw_channels(const Deployment& d, const PathLossModel& m, const SystemConfig& c,
                                        int M, std::uint64_t seed, const std::vector<int>& observers) {
  require(M >= 1, "draw_channels: M must be positive");
  ChannelRealization r;
  r.M = M;
  r.K = d.K;
  r.L = d.cells();
  const int U = r.L * r.K;
  r.p.resize(static_cast<std::size_t>(U));
  for (int l = 0; l < r.L; ++l)
    for (int i = 0; i < r.K; ++i) r.p[r.ue(l, i)] = c.P0() / pathloss(d.distance(l, i, l), m);

  engine gh(derive_seed(seed, "channels"));
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int j : observers) {
    require(j >= 0 && j < r.L, "draw_channels: observer index out of range");
    ObserverChannels o;
    o.bs = j;
    o.beta.resize(static_cast<std::size_t>(U));
    o.H.resize(M, U);
    for (int l = 0; l < r.L; ++l)
      for (int i = 0; i < r.K; ++i) {
        const int u = r.ue(l, i);
        o.beta[u] = pathloss(d.distance(l, i, j), m);
        const double sd = std::sqrt(o.beta[u] / 2.0);
        for (int k = 0; k < M; ++k) o.H(k, u) = {sd * n01(gh), sd * n01(gh)};
      }
    r.obs.push_back(std::move(o));
  }
  return r;
}

/// \brief Form de-spread pilot observations and MMSE estimates for a given
/// allocation. Overwrites any previous estimates in `r`.
inline void apply_pilots(ChannelRealization& r, const PilotAllocation& a, const SystemConfig& c,
                         std::uint64_t seed, EstimationOptions opt = {}) {
  require(a.K == r.K && static_cast<int>(a.label.size()) == r.L,
          "apply_pilots: allocation does not match realization");
  const int U = r.L * r.K;
  const double noise = opt.noiseless_pilots ? 0.0 : c.sigma2;

  std::vector<int> column(static_cast<std::size_t>(U));
  int S = 0;
  {
    std::vector<std::pair<long, int>> keys;
    for (int l = 0; l < r.L; ++l)
      for (int i = 0; i < r.K; ++i) keys.push_back({a.label[l] * r.K + i, r.ue(l, i)});
    std::sort(keys.begin(), keys.end());
    long last = -1;
    for (const auto& [seq, u] : keys) {
      if (seq != last) {
        ++S;
        last = seq;
      }
      column[u] = S - 1;
    }
  }

  engine gn(derive_seed(seed, "noise"));
  std::normal_distribution<double> n01(0.0, 1.0);
  const double nsd = std::sqrt(noise / 2.0);
  for (auto& o : r.obs) {
    o.column = column;
    o.Y.resize(r.M, S);
    for (int s = 0; s < S; ++s)
      for (int k = 0; k < r.M; ++k) o.Y(k, s) = {nsd * n01(gn), nsd * n01(gn)};
    // var = total received pilot power per entry on each column
    std::vector<double> var(static_cast<std::size_t>(S), noise);
    for (int u = 0; u < U; ++u) {
      const double amp = std::sqrt(c.rho() * r.p[u]);
      o.Y.col(column[u]) += amp * o.H.col(u);
      var[column[u]] += c.rho() * r.p[u] * o.beta[u];
    }
    o.coef.resize(static_cast<std::size_t>(U));
    o.gamma.resize(static_cast<std::size_t>(U));
    o.seq_weight.assign(static_cast<std::size_t>(S), 0.0);
    for (int u = 0; u < U; ++u) {
      const double amp = std::sqrt(c.rho() * r.p[u]);
      o.coef[u] = amp * o.beta[u] / var[column[u]];
      o.gamma[u] = o.coef[u] * o.coef[u] * var[column[u]];
      o.seq_weight[column[u]] += r.p[u] * o.coef[u] * o.coef[u];
    }
  }
}

/// Channels plus MMSE estimates at the observer BSs.
inline ChannelRealization estimate_channels(const Deployment& d, const PilotAllocation& a,
                                            const PathLossModel& m, const SystemConfig& c, int M,
                                            std::uint64_t seed, const std::vector<int>& observers,
                                            EstimationOptions opt = {}) {
  auto r = draw_channels(d, m, c, M, seed, observers);
  apply_pilots(r, a, c, seed, opt);
  return r;
}

/// Every BS as an observer.
inline std::vector<int> all_cells(const Deployment& d) {
  std::vector<int> v(static_cast<std::size_t>(d.cells()));
  for (int l = 0; l < d.cells(); ++l) v[l] = l;
  return v;
}

/// Combining vectors for the K UEs of the observer's own cell (M x K).
inline cmat combine(Scheme s, const ChannelRealization& r, const ObserverChannels& o,
                    const SystemConfig& c) {
  const int M = r.M;
  const int K = r.K;
  cmat Hj(M, K);
  for (int k = 0; k < K; ++k) Hj.col(k) = o.estimate(r.ue(o.bs, k));
  switch (s) {
    case Scheme::mr: return Hj;
    case Scheme::zf: {
      if (M <= K) throw domain_error("combine: ZF needs M > K");
      const cmat G = Hj.adjoint() * Hj;
      Eigen::LLT<cmat> llt(G);
      if (llt.info() != Eigen::Success) throw numerical_rank_error("combine: singular ZF Gram matrix");
      return Hj * llt.solve(cmat::Identity(K, K));
    }
    case Scheme::mmse: {
      // Noise-normalized: sum q (h h^H + (beta - gamma) I) + I, q = p / sigma2.
      double diag = 1.0;
      for (std::size_t u = 0; u < r.p.size(); ++u) diag += r.p[u] * (o.beta[u] - o.gamma[u]) / c.sigma2;
      cmat A = cmat::Identity(M, M) * diag;
      for (int s2 = 0; s2 < o.Y.cols(); ++s2)
        A.selfadjointView<Eigen::Lower>().rankUpdate(o.Y.col(s2), o.seq_weight[s2] / c.sigma2);
      Eigen::LLT<cmat> llt(A);
      if (llt.info() != Eigen::Success) throw numerical_rank_error("combine: M-MMSE matrix not positive definite");
      cmat rhs = Hj;
      for (int k = 0; k < K; ++k) rhs.col(k) *= r.p[r.ue(o.bs, k)] / c.sigma2;
      return llt.solve(rhs);
    }
  }
  throw domain_error("combine: unknown scheme");
}

/// \brief Instantaneous SINR of each own-cell UE with estimated interference,
/// estimation-error loading and noise in the denominator.
inline std::vector<double> instantaneous_sinr(const cmat& V, const ChannelRealization& r,
                                              const ObserverChannels& o, const SystemConfig& c) {
  const int K = r.K;
  double err = 0.0;
  for (std::size_t u = 0; u < r.p.size(); ++u) err += r.p[u] * (o.beta[u] - o.gamma[u]);
  const cmat P = V.adjoint() * o.Y;  // K x S
  std::vector<double> out(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const int u = r.ue(o.bs, k);
    const double desired = r.p[u] * std::norm(o.coef[u] * P(k, o.column[u]));
    double all = 0.0;
    for (int s = 0; s < P.cols(); ++s) all += o.seq_weight[s] * std::norm(P(k, s));
    const double den = (all - desired) + V.col(k).squaredNorm() * (err + c.sigma2);
    out[k] = desired / den;
  }
  return out;
}

}  // namespace eeplan
