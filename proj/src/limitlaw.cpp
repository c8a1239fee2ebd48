/*
   Copyright 2026 The eulerexp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include "eulerexp/limitlaw.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "eulerexp/numerics.hpp"
#include "eulerexp/rng.hpp"

namespace eulerexp {

Eigen::VectorXd trapezoid_weights(const TimeGrid& g, int K) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(K + 1);
  for (int k = 0; k < K; ++k) {
    const double h = 0.5 * g.dt(k);
    w[k] += h;
    w[k + 1] += h;
  }
  return w;
}

CltCoefficients clt_coefficients_at(const Jet& j, double sigma) {
  const double si = 1.0 / sigma;
  const double a = j.a, a1 = j.a1, a2 = j.a2, b = j.b, b1 = j.b1, b2 = j.b2;
  (void)a2;
  const double g = si * b * b1;
  const double b1sq = b1 * b1;
  CltCoefficients c;
  c.v2 = si * (b * b1sq - 0.5 * (a * b1 + a1 * b) - 0.25 * b * b * b2);
  c.u11 = 0.5 * g * g;
  c.u13 = -g * g * g / 3.0;
  c.u33 = g * g * g * g / 3.0;
  const double bracket = b * b * ((b1sq - a1) * (b1sq - a1) +
                                  (b1sq - 0.5 * b * b2) * (4 * b1sq - 1.5 * b * b2 - a1)) +
                         (a * b1) * (a * b1) - a * b * b1 * (3 * b1sq - a1 - b * b2);
  c.u22 = si * si * bracket / 3.0;
  return c;
}

CltCoefficientPaths clt_coefficients(const CoupledPaths& c) {
  const int N = c.grid().steps();
  CltCoefficientPaths p;
  p.v2.resize(N + 1);
  p.u11.resize(N + 1);
  p.u13.resize(N + 1);
  p.u22.resize(N + 1);
  p.u33.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    CltCoefficients q = clt_coefficients_at(c.ref_jet[k], c.Sigma[k]);
    p.v2[k] = q.v2;
    p.u11[k] = q.u11;
    p.u13[k] = q.u13;
    p.u22[k] = q.u22;
    p.u33[k] = q.u33;
  }
  return p;
}

std::pair<Eigen::VectorXd, double> kernel_and_C(const CoupledPaths& c, int T) {
  const int N = c.grid().steps();
  Eigen::VectorXd K(N + 1);
  for (int k = 0; k <= N; ++k) K[k] = -c.Sigma_inv[k] * c.ref_jet[k].b * c.ref_jet[k].b1;
  Eigen::VectorXd w = trapezoid_weights(c.grid(), T);
  const double C = 0.5 * w.dot(K.head(T + 1).cwiseAbs2());
  return {K, C};
}

namespace {

double a3_integrand(const Jet& j, double sigma_inv) {
  const double b1sq = j.b1 * j.b1;
  return sigma_inv * (0.5 * j.a * b1sq - 0.5 * j.a * j.a1 - 0.25 * j.a2 * j.b * j.b -
                      0.5 * j.b * b1sq * j.b1 + 0.25 * j.b * j.b * j.b1 * j.b2);
}

// Cumulative trapezoid integral of f on [0, t_k].
Eigen::VectorXd cumulative(const TimeGrid& g, const Eigen::VectorXd& f, int K) {
  Eigen::VectorXd c(K + 1);
  c[0] = 0.0;
  for (int k = 0; k < K; ++k) c[k + 1] = c[k] + 0.5 * g.dt(k) * (f[k] + f[k + 1]);
  return c;
}

}  // namespace

A3Mu A3_and_mu(const CoupledPaths& c, int T, const Eigen::VectorXd& u11,
               const Eigen::VectorXd& v2) {
  const TimeGrid& g = c.grid();
  Eigen::VectorXd w = trapezoid_weights(g, T);
  Eigen::VectorXd cu = cumulative(g, u11, T);
  A3Mu r;
  double ito = 0.0, fb_ds = 0.0, fb_dw = 0.0;
  for (int k = 0; k <= T; ++k) {
    const Jet& j = c.ref_jet[k];
    r.A3 += w[k] * a3_integrand(j, c.Sigma_inv[k]);
    fb_ds += w[k] * c.Sigma[k] * (j.a2 - j.b1 * j.b2) * cu[k];
    if (k < T) {
      ito += v2[k] * c.path.increments[k];
      fb_dw += c.Sigma[k] * j.b2 * cu[k] * c.path.increments[k];
    }
  }
  r.mu = ito + r.A3 + 0.5 * (fb_ds + fb_dw);
  return r;
}

namespace {

double min_eig(const Eigen::Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace

Theta theta_blocks(const CoupledPaths& c, int T, const CltCoefficientPaths& u) {
  const TimeGrid& g = c.grid();
  Eigen::VectorXd w = trapezoid_weights(g, T);
  Theta th;
  const double i11 = w.dot(u.u11.head(T + 1));
  const double i13 = w.dot(u.u13.head(T + 1));
  const double i33 = w.dot(u.u33.head(T + 1));
  const double i22 = w.dot((u.u22.head(T + 1) - u.v2.head(T + 1).cwiseAbs2()));
  // Feedback variance: (1/2) sum_{k,l} c(min)^2 lambda_k lambda_l.
  Eigen::VectorXd cu = cumulative(g, u.u11, T);
  Eigen::VectorXd lam(T);
  for (int k = 0; k < T; ++k) {
    const Jet& j = c.ref_jet[k];
    lam[k] = c.Sigma[k] * ((j.a2 - j.b1 * j.b2) * g.dt(k) + j.b2 * c.path.increments[k]);
  }
  double fb = 0.0, suffix = 0.0;
  for (int k = T - 1; k >= 0; --k) {
    fb += cu[k] * cu[k] * lam[k] * (2 * suffix + lam[k]);
    suffix += lam[k];
  }
  th.cov(0, 0) = i11;
  th.cov(2, 0) = th.cov(0, 2) = i13;
  th.cov(2, 2) = i33;
  th.cov(1, 1) = i22 + 0.5 * fb;
  th.min_eigenvalue = min_eig(th.cov);
  return th;
}

Theta theta_blocks_inner_mc(const CoupledPaths& c, int T, const CltCoefficientPaths& u,
                            double A3_T, int draws, int max_grid, std::uint64_t seed) {
  const TimeGrid& g = c.grid();
  const int stride = std::max(1, (T + max_grid - 1) / std::max(1, max_grid));
  std::vector<int> nodes;
  for (int k = 0; k < T; k += stride) nodes.push_back(k);
  nodes.push_back(T);
  const int L = static_cast<int>(nodes.size()) - 1;

  struct Piece {
    Eigen::Matrix3d root;
    double ds, dw, v2, gfb, ffb;
  };
  std::vector<Piece> pieces(L);
  Theta th;
  double ito_v2 = 0.0;
  for (int l = 0; l < L; ++l) {
    const int k = nodes[l];
    Piece& p = pieces[l];
    p.ds = g.times[nodes[l + 1]] - g.times[k];
    p.dw = c.path.W[nodes[l + 1]] - c.path.W[k];
    p.v2 = u.v2[k];
    ito_v2 += p.v2 * p.dw;
    const Jet& j = c.ref_jet[k];
    p.gfb = c.Sigma[k] * (j.a2 - j.b1 * j.b2);
    p.ffb = c.Sigma[k] * j.b2;
    Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
    q(0, 0) = u.u11[k];
    q(0, 2) = q(2, 0) = u.u13[k];
    q(1, 1) = u.u22[k] - u.v2[k] * u.v2[k];
    q(2, 2) = u.u33[k];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(q);
    Eigen::Vector3d ev = es.eigenvalues();
    const double scale = std::max(1e-300, ev.cwiseAbs().maxCoeff());
    if (ev[0] < -1e-12 * scale) ++th.psd_violations;
    ev = ev.cwiseMax(0.0);
    p.root = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  }

  std::vector<double> m(draws), nn(draws), ch(draws);
  NormalSequence z(seed, c.path.stream, RngDomain::Inner, 0);
  std::uint64_t ctr = 0;
  for (int d = 0; d < draws; ++d) {
    Eigen::Vector3d Lv = Eigen::Vector3d::Zero();
    double fb = 0.0;
    for (int l = 0; l < L; ++l) {
      const Piece& p = pieces[l];
      fb += 0.5 * Lv[0] * Lv[0] * (p.gfb * p.ds + p.ffb * p.dw);
      Eigen::Vector3d xi(z(ctr), z(ctr + 1), z(ctr + 2));
      ctr += 3;
      Lv += std::sqrt(p.ds) * (p.root * xi);
    }
    m[d] = Lv[0];
    nn[d] = Lv[1] + ito_v2 + A3_T + fb;
    ch[d] = Lv[2];
  }
  const std::vector<double>* cols[3] = {&m, &nn, &ch};
  double mean[3];
  for (int a = 0; a < 3; ++a) mean[a] = pairwise_sum(*cols[a]) / draws;
  std::vector<double> prod(draws);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b <= a; ++b) {
      for (int d = 0; d < draws; ++d) prod[d] = ((*cols[a])[d] - mean[a]) * ((*cols[b])[d] - mean[b]);
      th.cov(a, b) = th.cov(b, a) = pairwise_sum(prod) / (draws - 1);
    }
  }
  MeanSE ms = mean_se(nn);
  th.mean_N = ms.mean;
  th.mean_N_se = ms.se;
  th.min_eigenvalue = min_eig(th.cov);
  return th;
}

LimitLawProfile limit_law_profile(const CoupledPaths& c, int T) {
  LimitLawProfile p;
  p.T_index = T;
  std::tie(p.K, p.C_T) = kernel_and_C(c, T);
  p.Sigma_T = c.Sigma[T];
  p.X_T = c.X_ref[T];
  p.S_T = p.Sigma_T * p.Sigma_T * p.C_T;
  p.u = clt_coefficients(c);
  A3Mu am = A3_and_mu(c, T, p.u.u11, p.u.v2);
  p.A3_T = am.A3;
  p.mu_T = am.mu;
  p.theta = theta_blocks(c, T, p.u);
  return p;
}

}  // namespace eulerexp
