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
#include "eulerexp/errorproc.hpp"

#include <cmath>

#include "eulerexp/stepint.hpp"

namespace eulerexp {

namespace {

// Walks the fine steps with the coarse bookkeeping every functional needs.
template <class F>
void for_each_step(const CoupledPaths& c, F&& body) {
  const TimeGrid& g = c.grid();
  const int N = g.steps();
  int ci = -1;
  for (int k = 0; k < N; ++k) {
    const int kl = g.coarse_left[k];
    if (kl == k) ++ci;
    const double w0 = c.path.W[k] - c.path.W[kl];
    const double tau0 = g.times[k] - g.times[kl];
    const double nu0 = g.coarse_next[k] - g.times[k];
    StepIntegrals s = step_integrals(g.dt(k), c.path.increments[k], w0, tau0, nu0);
    body(k, ci, kl, w0, tau0, s);
  }
}

struct RemainderCoeffs {
  double r1_0, r1_w, r1_tau, r1_w2;
  double r2_0, r2_w2, r2_tau;
};

RemainderCoeffs remainder_coeffs(const Jet& x, const Jet& e, double v, double sn) {
  RemainderCoeffs r;
  r.r1_0 = x.a2 * v * v / (2 * sn);
  r.r1_w = sn * e.b * (e.b1 * e.b1 - e.a1);
  r.r1_tau = -sn * e.a * e.a1;
  r.r1_w2 = -0.5 * sn * e.b * e.b * e.a2;
  r.r2_0 = x.b2 * v * v / (2 * sn);
  r.r2_w2 = sn * (e.b * e.b1 * e.b1 - 0.5 * e.b * e.b * e.b2);
  r.r2_tau = -sn * e.a * e.b1;
  return r;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> error_process(const CoupledPaths& c) {
  Eigen::VectorXd U = c.X_euler - c.X_ref;
  U[0] = 0.0;
  Eigen::VectorXd V = c.sqrt_n() * U;
  return {U, V};
}

Eigen::VectorXd leading_term(const CoupledPaths& c, Eigen::VectorXd* M) {
  const int N = c.grid().steps();
  const double sn = c.sqrt_n();
  Eigen::VectorXd vbar(N + 1), m(N + 1);
  vbar[0] = m[0] = 0.0;
  double ibar = 0.0;
  for_each_step(c, [&](int k, int ci, int kl, double, double, const StepIntegrals& s) {
    const Jet& e = c.coarse_jet[ci];
    ibar += c.Sigma_inv[kl] * e.b * e.b1 * s.dW_w;
    m[k + 1] = -sn * ibar;
    vbar[k + 1] = c.Sigma[k + 1] * m[k + 1];
  });
  if (M) *M = std::move(m);
  return vbar;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> remainder_increments(const CoupledPaths& c,
                                                                 const Eigen::VectorXd& V) {
  const TimeGrid& g = c.grid();
  const int N = g.steps();
  const double sn = c.sqrt_n();
  Eigen::VectorXd R1(N + 1), R2(N + 1);
  int ci = -1;
  for (int k = 0; k <= N; ++k) {
    const int kl = k < N ? g.coarse_left[k] : g.coarse_index[g.n];
    if (k < N && kl == k) ++ci;
    // At t = 1 the coarse point itself is phi(t).
    const Jet e = k < N ? c.coarse_jet[ci] : c.model->jet(c.X_euler[N]);
    const double w0 = c.path.W[k] - c.path.W[kl];
    const double tau0 = g.times[k] - g.times[kl];
    RemainderCoeffs r = remainder_coeffs(c.ref_jet[k], e, V[k], sn);
    R1[k] = r.r1_0 + r.r1_w * w0 + r.r1_tau * tau0 + r.r1_w2 * w0 * w0;
    R2[k] = r.r2_0 + r.r2_w2 * w0 * w0 + r.r2_tau * tau0;
  }
  return {R1, R2};
}

Eigen::VectorXd second_order_term(const CoupledPaths& c, const Eigen::VectorXd& V) {
  const int N = c.grid().steps();
  const double sn = c.sqrt_n();
  Eigen::VectorXd out(N + 1);
  out[0] = 0.0;
  double acc = 0.0;
  for_each_step(c, [&](int k, int ci, int, double, double, const StepIntegrals& s) {
    const Jet& x = c.ref_jet[k];
    RemainderCoeffs r = remainder_coeffs(x, c.coarse_jet[ci], V[k], sn);
    const double dt_part = (r.r1_0 - x.b1 * r.r2_0) * s.ds + r.r1_w * s.ds_w +
                           (r.r1_tau - x.b1 * r.r2_tau) * s.ds_tau +
                           (r.r1_w2 - x.b1 * r.r2_w2) * s.ds_w2;
    const double dw_part = r.r2_0 * s.dW + r.r2_w2 * s.dW_w2 + r.r2_tau * s.dW_tau;
    acc += sn * c.Sigma_inv[k] * (dt_part + dw_part);
    out[k + 1] = acc;
  });
  return out;
}

ErrorFunctionals error_functionals(const CoupledPaths& c) {
  ErrorFunctionals f;
  std::tie(f.U, f.V) = error_process(c);
  f.Vbar = leading_term(c, &f.M);
  std::tie(f.R1, f.R2) = remainder_increments(c, f.V);
  f.N = second_order_term(c, f.V);
  return f;
}

CltProcesses clt_processes(const CoupledPaths& c) {
  const int N = c.grid().steps();
  const double n = static_cast<double>(c.grid().n);
  const double n32 = n * std::sqrt(n);
  CltProcesses p;
  p.A1.resize(N + 1);
  p.A2.resize(N + 1);
  p.A3.resize(N + 1);
  p.Cn.resize(N + 1);
  p.A1[0] = p.A2[0] = p.A3[0] = p.Cn[0] = 0.0;
  for_each_step(c, [&](int k, int ci, int kl, double, double, const StepIntegrals& s) {
    const Jet& e = c.coarse_jet[ci];
    const double si = c.Sigma_inv[k];
    const double b1sq = e.b1 * e.b1;
    const double a1 = e.b * (b1sq - e.a1) * s.dW_nu - e.a * e.b1 * s.dW_tau +
                      (e.b * b1sq - 0.5 * e.b * e.b * e.b2) * s.dW_w2;
    const double g = si * e.b * e.b1;
    const double a3 = e.a * (b1sq - e.a1) * s.ds_tau -
                      0.5 * (e.b * e.b * e.a2 + 2 * e.b * b1sq * e.b1 - e.b * e.b * e.b1 * e.b2) * s.ds_w2;
    const double kc = c.Sigma_inv[kl] * e.b * e.b1;
    p.A1[k + 1] = p.A1[k] + n * si * a1;
    p.A2[k + 1] = p.A2[k] + 2 * n32 * g * g * s.dW_nu_w;
    p.A3[k + 1] = p.A3[k] + n * si * a3;
    p.Cn[k + 1] = p.Cn[k] + n * kc * kc * s.ds_w2;
  });
  return p;
}

}  // namespace eulerexp
