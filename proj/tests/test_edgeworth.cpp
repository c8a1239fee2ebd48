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
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "eulerexp/edgeworth.hpp"
#include "eulerexp/grid.hpp"
#include "eulerexp/limitlaw.hpp"
#include "eulerexp/malliavin.hpp"
#include "eulerexp/pathsim.hpp"

using namespace eulerexp;

namespace {
std::vector<SymbolCoefficients> symbol_sample(const DiffusionModel& m, int paths) {
  auto g = std::make_shared<const TimeGrid>(make_grid(16, 2, {1.0}));
  const int T = g->T_index[0];
  std::vector<SymbolCoefficients> out;
  for (int i = 0; i < paths; ++i) {
    CoupledPaths c = simulate_coupled(m, g, 3, i);
    LimitLawProfile p = limit_law_profile(c, T);
    VariationState vs = first_variation(c);
    out.push_back(h_coefficients(c, p, malliavin_band(c, vs, T)));
  }
  return out;
}
}  // namespace

TEST_CASE("Hermite polynomials") {
  CHECK(hermite(3, 0.0) == 0.0);
  CHECK(hermite(3, 1.0) == -2.0);
  CHECK(hermite(5, 1.0) == 6.0);
  CHECK_THROWS(hermite(4, 1.0));
}

TEST_CASE("studentized density: zero coefficients give the normal") {
  StudentizedCoefficients a;
  for (double y : {-2.0, 0.0, 1.3}) {
    CHECK(studentized_density(a, 100, y) == doctest::Approx(normal_pdf(y)));
    CHECK(studentized_cdf(a, 100, y) == doctest::Approx(normal_cdf(y)));
  }
}

TEST_CASE("studentized density is the derivative of the CDF") {
  StudentizedCoefficients a;
  a.a1 = 0.3;
  a.a2 = -0.2;
  a.a3 = 0.15;
  const double n = 50;
  CHECK(studentized_density(a, n, 0.0) == doctest::Approx(normal_pdf(0.0) * (1 - a.a2 / std::sqrt(n))));
  for (double y : {-1.5, -0.2, 0.7, 2.4}) {
    const double h = 1e-5;
    CHECK(studentized_density(a, n, y) ==
          doctest::Approx((studentized_cdf(a, n, y + h) - studentized_cdf(a, n, y - h)) / (2 * h)).epsilon(1e-8));
  }
  CHECK(integrate_adaptive([&](double y) { return studentized_density(a, n, y); }, -12, 12, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(StudentizedDensity(a, n).has_negative_part());  // cubic tail
  CHECK(!StudentizedDensity(StudentizedCoefficients{}, n).has_negative_part());
}

TEST_CASE("neg_derivative_poly matches finite differences") {
  const std::vector<double> P{0.5, -1.0, 0.25};
  const double S = 1.7;
  auto f = [&](double v) { return poly_eval(P, v) * normal_pdf(v, S); };
  for (int r = 1; r <= 3; ++r) {
    std::vector<double> Q = neg_derivative_poly(P, S, r);
    for (double v : {-1.1, 0.3, 2.0}) {
      const double h = 1e-3;
      double fd = 0;
      if (r == 1) fd = -(f(v + h) - f(v - h)) / (2 * h);
      if (r == 2) fd = (f(v + h) - 2 * f(v) + f(v - h)) / (h * h);
      if (r == 3) fd = -(f(v + 2 * h) - 2 * f(v + h) + 2 * f(v - h) - f(v - 2 * h)) / (2 * h * h * h);
      CHECK(poly_eval(Q, v) * normal_pdf(v, S) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("GBM: deterministic C, pair density reduces to the studentized one") {
  std::vector<SymbolCoefficients> s = symbol_sample(builtin_model(ModelKind::GBM, {0.0, 0.2, 1.0}), 50);
  const double n = 64;
  PairDensity pd(s, n);
  REQUIRE(pd.deterministic_C());
  const double r = std::sqrt(pd.C0());
  StudentizedCoefficients a = studentized_coeffs(studentized_moments(s));
  CHECK(std::abs(a.a1 - (std::sqrt(2.0) - 0.04 / std::sqrt(2.0))) < 4 * a.se1);
  CHECK(a.a2 == doctest::Approx(0.0));
  CHECK(a.a3 == doctest::Approx(-std::sqrt(2.0) / 3).epsilon(1e-6));
  for (double y : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    CHECK(pd.z_density(y * r) * r == doctest::Approx(studentized_density(a, n, y)).epsilon(1e-8));
  }
}

TEST_CASE("pair density from analytic ingredients normalizes") {
  // log C ~ N(log 0.5, 0.3^2); H_j constant.
  PairIngredients ing;
  ing.pC = [](double x) { return normal_pdf(std::log(x / 0.5), 0.09) / x; };
  ing.cond = [](int j, double) { return 0.1 * j; };
  PairDensity pd(ing, 100, 0.01, 0.5 * std::exp(-3.0), 0.5 * std::exp(3.0));
  const Quadrature ql = gauss_legendre(120, std::log(pd.support_lo()), std::log(pd.support_hi()));
  const Quadrature qz = gauss_legendre(120, -14, 14);
  auto both = [&](auto g) {
    double s = 0;
    for (int i = 0; i < ql.nodes.size(); ++i) {
      const double x = std::exp(ql.nodes[i]), r = std::sqrt(x);
      for (int k = 0; k < qz.nodes.size(); ++k) {
        s += ql.weights[i] * qz.weights[k] * x * r * g(qz.nodes[k] * r, x);
      }
    }
    return s;
  };
  CHECK(both([&](double z, double x) { return pd.order0(z, x); }) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(both([&](double z, double x) { return pd.correction_raw(z, x); })) < 1e-4);
  const Quadrature qd = gauss_legendre(60, -8, 8);
  double zs = 0;
  for (int k = 0; k < qd.nodes.size(); ++k) zs += qd.weights[k] * pd.z_density(qd.nodes[k]);
  CHECK(zs == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS(PairDensity(ing, 100, 0.01, 1.0, 0.5));
}

TEST_CASE("marginal V density normalizes and matches its CDF") {
  MarginalSample a;
  a.Sigma = 1.2;
  a.C = 0.4;
  a.symbol.add(1, {0, 0}, 0.2);
  a.symbol.add(3, {0, 0}, -0.1);
  MarginalSample b = a;
  b.Sigma = 0.8;
  b.C = 0.9;
  MarginalVDensity d({a, b}, 64);
  CHECK(integrate_adaptive([&](double v) { return d.evaluate(v).order0; }, -15, 15, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(integrate_adaptive([&](double v) { return d.evaluate(v).correction; }, -15, 15, 1e-12)) < 1e-10);
  CHECK(d.order0_cdf(0.0) == doctest::Approx(0.5));
  const auto m2 = d.abs_moment(2.0);
  CHECK(m2[0] == doctest::Approx(0.5 * (1.44 * 0.4 + 0.64 * 0.9)));
  CHECK(m2[1] == doctest::Approx(integrate_adaptive(
                     [&](double v) { return v * v * d.evaluate(v).correction; }, -15, 15, 1e-12)).epsilon(1e-8));
}

TEST_CASE("density CSV layout") {
  std::ostringstream os;
  write_density_csv(os, "y,phi", {DensityRow{0.5, 0.25, 0.0, 0.25, 0.25, 0.0}});
  CHECK(os.str().substr(0, os.str().find('\n')) == "y,phi,correction,total,rectified,stderr");
}
