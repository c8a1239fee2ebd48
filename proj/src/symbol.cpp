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
#include "eulerexp/symbol.hpp"

#include <stdexcept>

namespace eulerexp {

void SymbolPolynomial::add(int m, std::array<int, 2> nv, double c0, double c1) {
  for (auto& t : terms_) {
    if (t.m == m && t.nv == nv) {
      t.c0 += c0;
      t.c1 += c1;
      return;
    }
  }
  terms_.push_back({m, nv, c0, c1});
}

std::array<double, 2> SymbolPolynomial::coeff(int m, std::array<int, 2> nv) const {
  for (const auto& t : terms_) {
    if (t.m == m && t.nv == nv) return {t.c0, t.c1};
  }
  return {0.0, 0.0};
}

namespace {

struct Mono {
  int m;
  std::array<int, 2> nv;
};

Mono times(Mono a, Mono b) { return {a.m + b.m, {a.nv[0] + b.nv[0], a.nv[1] + b.nv[1]}}; }

}  // namespace

SymbolPolynomial anticipative_symbol(const CoupledPaths& cp, const Eigen::VectorXd& K,
                                     const MalliavinBand& band,
                                     const std::vector<FunctionalDerivatives>& F,
                                     KernelWeight weight) {
  if (F.size() > 2) throw std::invalid_argument("anticipative_symbol: at most two functionals");
  const TimeGrid& g = cp.grid();
  const int T = band.T_index;
  const int q = static_cast<int>(F.size());
  // Basis: index 0 is C on (iu)^2, index a+1 is F_a on (iv_a).
  std::vector<Mono> mono{{2, {0, 0}}};
  std::vector<const Eigen::VectorXd*> first{&band.DC}, second{&band.DDC};
  std::vector<double> scale{0.5};
  for (int a = 0; a < q; ++a) {
    Mono mo{0, {0, 0}};
    mo.nv[a] = 1;
    mono.push_back(mo);
    first.push_back(&F[a].D);
    second.push_back(&F[a].DD);
    scale.push_back(1.0);
  }
  const int B = q + 1;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(B, B);
  Eigen::VectorXd L = Eigen::VectorXd::Zero(B);
  for (int j = 0; j < T; ++j) {
    const double kw = (weight == KernelWeight::Pathwise ? K[j] : K[T]) * g.dt(j);
    for (int x = 0; x < B; ++x) {
      const double fx = scale[x] * (*first[x])[j];
      L[x] += kw * scale[x] * (*second[x])[j];
      for (int y = 0; y < B; ++y) G(x, y) += kw * fx * scale[y] * (*first[y])[j];
    }
  }
  SymbolPolynomial p;
  const Mono iu{1, {0, 0}};
  for (int x = 0; x < B; ++x) {
    for (int y = 0; y < B; ++y) {
      Mono mo = times(iu, times(mono[x], mono[y]));
      p.add(mo.m, mo.nv, 0.5 * G(x, y));
    }
    Mono mo = times(iu, mono[x]);
    p.add(mo.m, mo.nv, 0.5 * L[x]);
  }
  return p;
}

void add_adaptive_part(SymbolPolynomial& poly, const LimitLawProfile& pr) {
  const double t11 = pr.theta.t11();
  if (!(t11 > 0)) throw DegenerateModelError("Theta11 <= 0: expansion undefined");
  poly.add(2, {0, 0}, 0.0, pr.theta.t31() / (2 * t11));
  poly.add(1, {0, 0}, pr.mu_T, pr.theta.t21() / t11);
}

SymbolCoefficients h_coefficients(const LimitLawProfile& pr, const SymbolPolynomial& anti) {
  const double t11 = pr.theta.t11();
  if (!(t11 > 0)) throw DegenerateModelError("Theta11 <= 0: expansion undefined");
  SymbolCoefficients s;
  s.C = pr.C_T;
  s.H[1] = pr.theta.t31() / (2 * t11);
  s.H[2] = pr.mu_T;
  s.H[3] = pr.theta.t21() / t11;
  s.H[4] = anti.coeff(3)[0];
  s.H[5] = anti.coeff(1, {1, 0})[0];
  s.H[6] = anti.coeff(5)[0];
  s.H[7] = anti.coeff(1, {2, 0})[0];
  s.H[8] = anti.coeff(3, {1, 0})[0];
  return s;
}

SymbolCoefficients h_coefficients(const CoupledPaths& cp, const LimitLawProfile& pr,
                                  const MalliavinBand& band, KernelWeight weight) {
  std::vector<FunctionalDerivatives> F{{band.DC, band.DDC}};
  return h_coefficients(pr, anticipative_symbol(cp, pr.K, band, F, weight));
}

}  // namespace eulerexp
