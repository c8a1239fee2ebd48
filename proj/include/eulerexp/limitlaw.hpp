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
#include <cstdint>
#include <utility>

#include "eulerexp/pathsim.hpp"

namespace eulerexp {

// Pointwise coefficients of the stable CLT. v1 = v3 = 0 and u12 = u23 = 0.
struct CltCoefficients {
  double v2 = 0, u11 = 0, u13 = 0, u22 = 0, u33 = 0;
};

CltCoefficients clt_coefficients_at(const Jet& j, double sigma);

struct CltCoefficientPaths {
  Eigen::VectorXd v2, u11, u13, u22, u33;
};

CltCoefficientPaths clt_coefficients(const CoupledPaths& coupled);

// K = -Sigma^{-1} b b'(X) on the fine grid and C_T = (1/2) int_0^T K^2.
std::pair<Eigen::VectorXd, double> kernel_and_C(const CoupledPaths& coupled, int T_index);

struct A3Mu {
  double A3 = 0;
  double mu = 0;
};

A3Mu A3_and_mu(const CoupledPaths& coupled, int T_index, const Eigen::VectorXd& u11,
               const Eigen::VectorXd& v2);

// Conditional covariance of (M, N, Chat); indices 0, 1, 2.
struct Theta {
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double min_eigenvalue = 0;
  double mean_N = 0;     // inner-MC only: estimate of mu
  double mean_N_se = 0;  // inner-MC only
  int psd_violations = 0;

  double t11() const { return cov(0, 0); }
  double t21() const { return cov(1, 0); }
  double t31() const { return cov(2, 0); }
  double t22() const { return cov(1, 1); }
  double t32() const { return cov(2, 1); }
  double t33() const { return cov(2, 2); }
};

// Closed form: the u-integrals, plus the conditional variance of the
// feedback term (1/2) int (L^1)^2 (g ds + f dW), g = Sigma(a'' - b'b''),
// f = Sigma b''.
Theta theta_blocks(const CoupledPaths& coupled, int T_index, const CltCoefficientPaths& u);

// Monte Carlo over the conditionally Gaussian L given the path, on a grid
// subsampled to at most max_grid steps.
Theta theta_blocks_inner_mc(const CoupledPaths& coupled, int T_index,
                            const CltCoefficientPaths& u, double A3_T, int draws,
                            int max_grid, std::uint64_t seed);

struct LimitLawProfile {
  int T_index = 0;
  Eigen::VectorXd K;
  double C_T = 0;
  double S_T = 0;
  double Sigma_T = 0;
  double X_T = 0;
  CltCoefficientPaths u;
  double A3_T = 0;
  double mu_T = 0;
  Theta theta;
};

LimitLawProfile limit_law_profile(const CoupledPaths& coupled, int T_index);

// Trapezoid weights of int_0^{t_K} on the fine grid.
Eigen::VectorXd trapezoid_weights(const TimeGrid& grid, int K);

}  // namespace eulerexp
