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

#include "doctest.h"
#include "eulerexp/affine.hpp"
#include "eulerexp/grid.hpp"

using namespace eulerexp;

TEST_CASE("explicit solution and Euler agree for constant coefficients without noise") {
  AffineSde s{[](double) { return -0.5; }, [](double) { return 1.0; },
              [](double) { return 0.0; }, [](double) { return 0.0; }, 2.0};
  BrownianPath p = sample_brownian(std::make_shared<const TimeGrid>(make_grid(1000, 1, {1.0})), 1, 0);
  Eigen::VectorXd e = affine_explicit(s, p), u = affine_euler(s, p);
  const double exact = 2 + (2.0 - 2) * std::exp(-0.5);  // fixed point is 2
  CHECK(e[e.size() - 1] == doctest::Approx(exact).epsilon(1e-3));
  CHECK(u[u.size() - 1] == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("additive noise: gap halves with the step") {
  AffineSde s{[](double t) { return -1.0 + t; }, [](double t) { return std::sin(t); },
              [](double) { return 0.0; }, [](double t) { return 0.5 + t; }, 1.0};
  AffineGapPair g = affine_gap(s, 64, 400, 3);
  CHECK(g.ratio() == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("multiplicative noise: gap shrinks by about sqrt(2)") {
  AffineSde s{[](double) { return 0.1; }, [](double) { return 0.0; },
              [](double) { return 0.4; }, [](double) { return 0.0; }, 1.0};
  AffineGapPair g = affine_gap(s, 64, 400, 3);
  CHECK(g.ratio() == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
}
