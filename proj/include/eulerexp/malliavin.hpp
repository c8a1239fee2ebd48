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

#include <Eigen/Dense>

#include "eulerexp/pathsim.hpp"

namespace eulerexp {

// First variation of the discretized reference path and the per-step data
// shared by every derivative computation. Derivatives are with respect to
// the fine Brownian increments, so D_t at a grid time t_j perturbs step j.
struct VariationState {
  Eigen::VectorXd Y;  // Y_{k+1} = Phi_x(k) Y_k, Y_0 = 1
  Eigen::VectorXd phi_x, phi_w, phi_xx, phi_xw;  // per step
  Eigen::VectorXd c;  // b'' dW + (a'' - b'b'') h, per step
  Eigen::VectorXd e;  // b''' dW + (a''' - b''^2 - b'b''') h, per step
  // Prefix sums over l < k: P = sum c Y, Q = sum Phi_xx Y^2 / Y_{l+1},
  // R = sum e Y^2, PQ = sum c Y Q.
  Eigen::VectorXd P, Q, R, PQ;
};

VariationState first_variation(const CoupledPaths& coupled);

// Single-point derivatives by direct forward propagation. Indices are fine
// grid indices; r > t gives 0 and r = t gives the diagonal value.
double malliavin_DX(const CoupledPaths& coupled, const VariationState& vs, int r, int t);
double malliavin_DSigma(const CoupledPaths& coupled, const VariationState& vs, int r, int t);
double malliavin_DC(const CoupledPaths& coupled, const VariationState& vs, int t, int T);
// lim_{s -> t-} D_s D_t C, realized as the mixed derivative with respect to
// steps t-1 and t. t = 0 is mapped to t = 1.
double malliavin_DDC(const CoupledPaths& coupled, const VariationState& vs, int t, int T);

// D_tC, D_tD_tC and the terminal derivatives of X_T and Sigma_T for every
// t_j < T, in O(N).
struct MalliavinBand {
  int T_index = 0;
  Eigen::VectorXd DC, DDC;
  Eigen::VectorXd DX_T, DDX_T;
  Eigen::VectorXd DSigma_T, DDSigma_T;
};

MalliavinBand malliavin_band(const CoupledPaths& coupled, const VariationState& vs, int T);

}  // namespace eulerexp
