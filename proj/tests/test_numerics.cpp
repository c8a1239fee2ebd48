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
#include <numbers>
#include <vector>

#include "doctest.h"
#include "eulerexp/numerics.hpp"
#include "eulerexp/rng.hpp"

using namespace eulerexp;

TEST_CASE("normal pdf and cdf") {
  CHECK(normal_pdf(0.0) == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi)));
  CHECK(normal_pdf(1.0, 4.0) == doctest::Approx(std::exp(-0.125) / std::sqrt(8 * std::numbers::pi)));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(normal_pdf(0.5f) == doctest::Approx(normal_pdf(0.5)).epsilon(1e-6));
}

TEST_CASE("pairwise sum is exact on integers and order stable") {
  std::vector<double> x(1001);
  for (int i = 0; i <= 1000; ++i) x[i] = i;
  CHECK(pairwise_sum(x) == 500500.0);
  CHECK(pairwise_sum(nullptr, 0) == 0.0);
}

TEST_CASE("mean and standard error") {
  MeanSE m = mean_se({1, 2, 3, 4});
  CHECK(m.mean == 2.5);
  CHECK(m.sd == doctest::Approx(std::sqrt(5.0 / 3)));
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3) / 2));
}

TEST_CASE("Gauss-Hermite integrates normal moments") {
  Quadrature q = gauss_hermite(20);
  CHECK(q.weights.sum() == doctest::Approx(1.0).epsilon(1e-13));
  double m2 = 0, m4 = 0, m6 = 0;
  for (int i = 0; i < 20; ++i) {
    const double x = q.nodes[i];
    m2 += q.weights[i] * x * x;
    m4 += q.weights[i] * std::pow(x, 4);
    m6 += q.weights[i] * std::pow(x, 6);
  }
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m6 == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("Gauss-Legendre and adaptive quadrature") {
  Quadrature q = gauss_legendre(10, 0, 2);
  CHECK(q.weights.dot(q.nodes.array().pow(5).matrix()) == doctest::Approx(64.0 / 6));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x * x); }, -10, 10, 1e-13) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0, 1, 1e-12) ==
        doctest::Approx(2.0 / 3).epsilon(1e-10));
}

TEST_CASE("KDE integrates to one and NW recovers a line") {
  std::vector<double> x(2000), y(2000);
  for (int i = 0; i < 2000; ++i) {
    x[i] = normal_at(3, 0, RngDomain::Test, 0, i);
    y[i] = 2 * x[i] + 1;
  }
  const double h = silverman_bandwidth(x);
  CHECK(h > 0);
  GaussianKde kde(x, h);
  CHECK(integrate_adaptive([&](double t) { return kde(t); }, kde.min() - 12 * h,
                           kde.max() + 12 * h, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  NadarayaWatson nw(x, y, h);
  CHECK(nw(0.0) == doctest::Approx(1.0).epsilon(0.05));
  NadarayaWatson flat(x, std::vector<double>(2000, 3.5), h);
  CHECK(flat(0.7) == doctest::Approx(3.5));
}

TEST_CASE("weighted line fit") {
  LineFit f = weighted_line_fit({1, 2, 3, 4}, {3, 5, 7, 9}, {1, 1, 1, 1});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_se == doctest::Approx(1 / std::sqrt(5.0)));  // absolute weights
}

TEST_CASE("parallel_for covers every index and propagates exceptions") {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_WITH(parallel_for(100, 3,
                                 [](std::size_t i) {
                                   if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
                                 }),
                    "17");
}
