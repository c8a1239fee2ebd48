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
#include "eulerexp/malliavin.hpp"

#include <algorithm>

#include "eulerexp/limitlaw.hpp"

namespace eulerexp {

namespace {

struct GJet {
  double g, g1, g2;  // b b' and its first two derivatives
};

GJet gjet(const Jet& j) {
  return {j.b * j.b1, j.b1 * j.b1 + j.b * j.b2, 3 * j.b1 * j.b2 + j.b * j.b3};
}

}  // namespace

VariationState first_variation(const CoupledPaths& cp) {
  const TimeGrid& g = cp.grid();
  const int N = g.steps();
  const DiffusionModel& model = *cp.model;
  VariationState vs;
  vs.Y.resize(N + 1);
  vs.phi_x.resize(N);
  vs.phi_w.resize(N);
  vs.phi_xx.resize(N);
  vs.phi_xw.resize(N);
  vs.c.resize(N);
  vs.e.resize(N);
  vs.P.resize(N + 1);
  vs.Q.resize(N + 1);
  vs.R.resize(N + 1);
  vs.PQ.resize(N + 1);
  vs.Y[0] = 1.0;
  vs.P[0] = vs.Q[0] = vs.R[0] = vs.PQ[0] = 0.0;
  const bool exact = cp.reference_exact && model.has_exact_solution();
  for (int k = 0; k < N; ++k) {
    const Jet& j = cp.ref_jet[k];
    const double h = g.dt(k), dw = cp.path.increments[k];
    StepJet s = exact ? model.exact_step(cp.X_ref[k], h, dw) : euler_step(j, h, dw);
    vs.phi_x[k] = s.dx;
    vs.phi_w[k] = s.dw;
    vs.phi_xx[k] = s.dxx;
    vs.phi_xw[k] = s.dxw;
    vs.c[k] = j.b2 * dw + (j.a2 - j.b1 * j.b2) * h;
    vs.e[k] = j.b3 * dw + (j.a3 - j.b2 * j.b2 - j.b1 * j.b3) * h;
    vs.Y[k + 1] = s.dx * vs.Y[k];
    const double y = vs.Y[k];
    vs.P[k + 1] = vs.P[k] + vs.c[k] * y;
    vs.PQ[k + 1] = vs.PQ[k] + vs.c[k] * y * vs.Q[k];
    vs.Q[k + 1] = vs.Q[k] + s.dxx * y * y / vs.Y[k + 1];
    vs.R[k + 1] = vs.R[k] + vs.e[k] * y * y;
  }
  return vs;
}

double malliavin_DX(const CoupledPaths& cp, const VariationState& vs, int r, int t) {
  if (r > t) return 0.0;
  if (r == t) return cp.ref_jet[t].b;
  double d = vs.phi_w[r];
  for (int l = r + 1; l < t; ++l) d *= vs.phi_x[l];
  return d;
}

double malliavin_DSigma(const CoupledPaths& cp, const VariationState& vs, int r, int t) {
  if (r > t) return 0.0;
  if (r == t) return cp.ref_jet[t].b1 * cp.Sigma[t];
  double d = vs.phi_w[r];
  double dl = cp.ref_jet[r].b1;
  for (int l = r + 1; l < t; ++l) {
    dl += vs.c[l] * d;
    d *= vs.phi_x[l];
  }
  return cp.Sigma[t] * dl;
}

double malliavin_DC(const CoupledPaths& cp, const VariationState& vs, int t, int T) {
  if (t >= T) return 0.0;
  Eigen::VectorXd wt = trapezoid_weights(cp.grid(), T);
  double d = vs.phi_w[t];
  double dl = cp.ref_jet[t].b1;
  double acc = 0.0;
  for (int k = t + 1; k <= T; ++k) {
    GJet q = gjet(cp.ref_jet[k]);
    const double si = cp.Sigma_inv[k];
    const double K = -si * q.g;
    const double dK = si * (-q.g1 * d + q.g * dl);
    acc += wt[k] * K * dK;
    if (k < T) {
      dl += vs.c[k] * d;
      d *= vs.phi_x[k];
    }
  }
  return acc;
}

double malliavin_DDC(const CoupledPaths& cp, const VariationState& vs, int t, int T) {
  const int j = std::max(t, 1);
  const int i = j - 1;
  if (j >= T) return 0.0;
  Eigen::VectorXd wt = trapezoid_weights(cp.grid(), T);
  const Jet& xj = cp.ref_jet[j];
  double dxi = vs.phi_w[i] * vs.phi_x[j];
  double dxj = vs.phi_w[j];
  double ddx = vs.phi_xw[j] * vs.phi_w[i];
  double dli = cp.ref_jet[i].b1 + vs.c[j] * vs.phi_w[i];
  double dlj = xj.b1;
  double ddl = xj.b2 * vs.phi_w[i];
  double acc = 0.0;
  for (int k = j + 1; k <= T; ++k) {
    GJet q = gjet(cp.ref_jet[k]);
    const double si = cp.Sigma_inv[k];
    const double K = -si * q.g;
    const double dKi = si * (-q.g1 * dxi + q.g * dli);
    const double dKj = si * (-q.g1 * dxj + q.g * dlj);
    const double ddK = si * (-q.g2 * dxi * dxj - q.g1 * ddx + q.g1 * (dxj * dli + dxi * dlj) +
                             q.g * ddl - q.g * dli * dlj);
    acc += wt[k] * (dKi * dKj + K * ddK);
    if (k < T) {
      ddl += vs.e[k] * dxi * dxj + vs.c[k] * ddx;
      dli += vs.c[k] * dxi;
      dlj += vs.c[k] * dxj;
      ddx = vs.phi_x[k] * ddx + vs.phi_xx[k] * dxi * dxj;
      dxi *= vs.phi_x[k];
      dxj *= vs.phi_x[k];
    }
  }
  return acc;
}

MalliavinBand malliavin_band(const CoupledPaths& cp, const VariationState& vs, int T) {
  MalliavinBand b;
  b.T_index = T;
  b.DC = Eigen::VectorXd::Zero(T);
  b.DDC = Eigen::VectorXd::Zero(T);
  b.DX_T = Eigen::VectorXd::Zero(T);
  b.DDX_T = Eigen::VectorXd::Zero(T);
  b.DSigma_T = Eigen::VectorXd::Zero(T);
  b.DDSigma_T = Eigen::VectorXd::Zero(T);
  if (T < 1) return b;
  Eigen::VectorXd wt = trapezoid_weights(cp.grid(), T);

  // Suffix sums over k in [j+1, T] of the per-point basis quantities.
  Eigen::VectorXd Sa = Eigen::VectorXd::Zero(T + 2), Sb = Sa, Sc = Sa, Sd = Sa, Se = Sa;
  for (int k = T; k >= 1; --k) {
    GJet q = gjet(cp.ref_jet[k]);
    const double si = cp.Sigma_inv[k];
    const double Y = vs.Y[k], P = vs.P[k];
    const double K = -si * q.g;
    const double phi1 = si * (-q.g1 * Y + q.g * P);
    const double phi0 = si * q.g;
    const double psi2 = si * (-q.g2 * Y * Y - q.g1 * Y * vs.Q[k] + 2 * q.g1 * Y * P +
                              q.g * (vs.R[k] + vs.PQ[k]) - q.g * P * P);
    Sa[k] = Sa[k + 1] + wt[k] * K * phi1;
    Sb[k] = Sb[k + 1] + wt[k] * K * phi0;
    Sc[k] = Sc[k + 1] + wt[k] * (phi1 * phi1 + K * psi2);
    Sd[k] = Sd[k + 1] + wt[k] * phi1 * phi0;
    Se[k] = Se[k + 1] + wt[k] * phi0 * phi0;
  }

  const double YT = vs.Y[T], ST = cp.Sigma[T], PT = vs.P[T];
  for (int j = 0; j < T; ++j) {
    const double Aj = vs.phi_w[j] / vs.Y[j + 1];
    const double aj = cp.ref_jet[j].b1 - Aj * vs.P[j + 1];
    b.DC[j] = Aj * Sa[j + 1] + aj * Sb[j + 1];
    b.DX_T[j] = Aj * YT;
    b.DSigma_T[j] = ST * (aj + Aj * PT);
    if (j == 0) continue;
    const int i = j - 1;
    const double Ai = vs.phi_w[i] / vs.Y[j];
    const double ai = cp.ref_jet[i].b1 - Ai * vs.P[j];
    const double AA = Ai * Aj;
    const double E = vs.phi_xw[j] * vs.phi_w[i] / vs.Y[j + 1];
    const double Q1 = vs.Q[j + 1], P1 = vs.P[j + 1];
    const double e0 = E - AA * Q1;
    const double d0 = cp.ref_jet[j].b2 * vs.phi_w[i] - AA * (vs.R[j + 1] + vs.PQ[j + 1]) - E * P1 +
                      AA * Q1 * P1;
    const double cross = Ai * aj + Aj * ai;
    b.DDC[j] = AA * Sc[j + 1] + cross * Sd[j + 1] + ai * aj * Se[j + 1] +
               (e0 - cross) * Sa[j + 1] + (d0 - ai * aj) * Sb[j + 1];
    b.DDX_T[j] = YT * (e0 + AA * vs.Q[T]);
    const double ddl = d0 + AA * (vs.R[T] + vs.PQ[T]) + e0 * PT;
    const double dli = ai + Ai * PT, dlj = aj + Aj * PT;
    b.DDSigma_T[j] = ST * (ddl + dli * dlj);
  }
  if (T >= 2) {
    b.DDC[0] = b.DDC[1];
    b.DDX_T[0] = b.DDX_T[1];
    b.DDSigma_T[0] = b.DDSigma_T[1];
  }
  return b;
}

}  // namespace eulerexp
