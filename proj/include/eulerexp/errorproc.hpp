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
#include <utility>

#include "eulerexp/pathsim.hpp"

namespace eulerexp {

struct ErrorFunctionals {
  Eigen::VectorXd U, V;     // X_euler - X_ref and sqrt(n) U
  Eigen::VectorXd Vbar, M;  // leading term and Sigma^{-1} Vbar
  Eigen::VectorXd R1, R2;   // remainder integrands, pointwise
  Eigen::VectorXd N;        // second-order term
};

std::pair<Eigen::VectorXd, Eigen::VectorXd> error_process(const CoupledPaths& coupled);

// Vbar_t = -sqrt(n) Sigma_t int Sigma_phi^{-1} b b'(X^n_phi)(W - W_phi) dW.
// The optional M receives Sigma^{-1} Vbar.
Eigen::VectorXd leading_term(const CoupledPaths& coupled, Eigen::VectorXd* M = nullptr);

std::pair<Eigen::VectorXd, Eigen::VectorXd> remainder_increments(const CoupledPaths& coupled,
                                                                 const Eigen::VectorXd& V);

// N_t = sqrt(n) int Sigma^{-1}(dR - b'(X) R(2) ds). The remainder integrands
// are rebuilt from V so that the Brownian monomials inside each fine step
// are integrated exactly.
Eigen::VectorXd second_order_term(const CoupledPaths& coupled, const Eigen::VectorXd& V);

ErrorFunctionals error_functionals(const CoupledPaths& coupled);

// Processes of the stable CLT for (M^n, A^n(1), A^n(2)), plus A^n(3) and
// the quadratic variation C^n = <M^n>. All on the fine grid.
struct CltProcesses {
  Eigen::VectorXd A1, A2, A3, Cn;
};

CltProcesses clt_processes(const CoupledPaths& coupled);

}  // namespace eulerexp
