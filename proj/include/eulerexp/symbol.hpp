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

#include <stdexcept>
#include <Eigen/Dense>
#include <array>
#include <vector>

#include "eulerexp/limitlaw.hpp"
#include "eulerexp/malliavin.hpp"

namespace eulerexp {

// Monomial (c0 + c1 z)(iu)^m (iv_1)^n_1 (iv_2)^n_2 of a random symbol.
struct SymbolTerm {
  int m = 0;
  std::array<int, 2> nv{0, 0};
  double c0 = 0;
  double c1 = 0;
};

// Sparse polynomial in (iu, iv_1, iv_2) with coefficients affine in z.
class SymbolPolynomial {
 public:
  void add(int m, std::array<int, 2> nv, double c0, double c1 = 0.0);
  // Coefficient of (iu)^m (iv)^nv; {c0, c1}.
  std::array<double, 2> coeff(int m, std::array<int, 2> nv = {0, 0}) const;
  const std::vector<SymbolTerm>& terms() const { return terms_; }

 private:
  std::vector<SymbolTerm> terms_;
};

enum class KernelWeight { Pathwise, Terminal };

// D_tF and D_tD_tF per fine step t_j < T.
struct FunctionalDerivatives {
  Eigen::VectorXd D, DD;
};

// (1/2) int_0^T Kbar(t)(iu)[(D_tC (iu)^2/2 + sum_a D_tF_a (iv_a))^2
//                           + D_tD_tC (iu)^2/2 + sum_a D_tD_tF_a (iv_a)] dt,
// with powers collected by polynomial multiplication. At most two F's.
SymbolPolynomial anticipative_symbol(const CoupledPaths& coupled, const Eigen::VectorXd& K,
                                     const MalliavinBand& band,
                                     const std::vector<FunctionalDerivatives>& F,
                                     KernelWeight weight = KernelWeight::Pathwise);

// Adds H1 z (iu)^2 + (H2 + H3 z)(iu) from the profile.
void add_adaptive_part(SymbolPolynomial& poly, const LimitLawProfile& profile);

struct SymbolCoefficients {
  std::array<double, 9> H{};  // H[1]..H[8]; H[0] unused
  double C = 0;
};

class DegenerateModelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// H1..H3 from the profile, H4..H8 from the anticipative symbol with F = C.
SymbolCoefficients h_coefficients(const LimitLawProfile& profile,
                                  const SymbolPolynomial& anticipative_with_F_eq_C);

// Convenience: the full F = C pipeline for one path.
SymbolCoefficients h_coefficients(const CoupledPaths& coupled, const LimitLawProfile& profile,
                                  const MalliavinBand& band,
                                  KernelWeight weight = KernelWeight::Pathwise);

}  // namespace eulerexp
