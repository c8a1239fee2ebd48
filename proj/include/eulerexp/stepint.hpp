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
#pragma once

namespace eulerexp {

// Integrals over one fine step [t_k, t_k + h] with increment dw of the
// Brownian monomials that appear in the error expansion, conditioned on
// the step's endpoints. w0 = W_{t_k} - W_phi, tau0 = t_k - phi and
// nu0 = (next coarse time) - t_k.
struct StepIntegrals {
  // ds integrals
  double ds = 0, ds_w = 0, ds_w2 = 0, ds_tau = 0;
  // dW integrals
  double dW = 0, dW_w = 0, dW_w2 = 0, dW_tau = 0, dW_nu = 0, dW_nu_w = 0;
};

inline StepIntegrals step_integrals(double h, double dw, double w0, double tau0, double nu0) {
  StepIntegrals s;
  const double d2 = dw * dw;
  s.ds = h;
  s.ds_w = h * (w0 + 0.5 * dw);
  s.ds_w2 = h * (w0 * w0 + w0 * dw + d2 / 3.0 + h / 6.0);
  s.ds_tau = h * (tau0 + 0.5 * h);
  s.dW = dw;
  s.dW_w = w0 * dw + 0.5 * (d2 - h);
  s.dW_w2 = w0 * w0 * dw + w0 * (d2 - h) + d2 * dw / 3.0 - 0.5 * h * dw;
  s.dW_tau = tau0 * dw + 0.5 * h * dw;
  s.dW_nu = nu0 * dw - 0.5 * h * dw;
  s.dW_nu_w = nu0 * s.dW_w - (w0 * 0.5 * h * dw + h * d2 / 3.0 - h * h / 3.0);
  return s;
}

}  // namespace eulerexp
