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
#include <sstream>
#include <vector>

#include "doctest.h"
#include "eulerexp/grid.hpp"
#include "eulerexp/model.hpp"
#include "eulerexp/numerics.hpp"
#include "eulerexp/pathsim.hpp"

using namespace eulerexp;

TEST_CASE("grid structure") {
  TimeGrid g = make_grid(8, 4, {1.0});
  CHECK(g.steps() == 32);
  CHECK(g.times[0] == 0.0);
  CHECK(g.times[32] == 1.0);
  CHECK(g.coarse_index.size() == 9);
  CHECK(g.coarse_index[3] == 12);
  CHECK(g.coarse_left[13] == 12);
  CHECK(g.coarse_next[13] == doctest::Approx(0.5));
  CHECK(g.T_index[0] == 32);
  CHECK(g.levels == 2);
  CHECK_THROWS_AS(g.index_of(0.3), GridError);
  CHECK_THROWS(make_grid(0, 4, {}));
  CHECK_THROWS(make_grid(8, 4, {1.5}));
}

TEST_CASE("off-grid T points are inserted") {
  TimeGrid g = make_grid(4, 2, {0.3, 1.0});
  CHECK(g.steps() == 9);
  CHECK(g.inserted.size() == 1);
  CHECK(g.times[g.T_index[0]] == doctest::Approx(0.3));
  for (int k = 0; k < g.steps(); ++k) CHECK(g.dt(k) > 0);
}

TEST_CASE("Brownian paths nest across refinements") {
  auto g1 = std::make_shared<const TimeGrid>(make_grid(16, 1, {}, 16));
  auto g4 = std::make_shared<const TimeGrid>(make_grid(16, 4, {}, 16));
  auto g2n = std::make_shared<const TimeGrid>(make_grid(32, 2, {}, 16));
  BrownianPath a = sample_brownian(g1, 3, 9), b = sample_brownian(g4, 3, 9),
               c = sample_brownian(g2n, 3, 9);
  for (int i = 0; i <= 16; ++i) {
    CHECK(b.W[4 * i] == doctest::Approx(a.W[i]).epsilon(1e-13));
    CHECK(c.W[4 * i] == doctest::Approx(a.W[i]).epsilon(1e-13));
  }
}

TEST_CASE("Brownian increments have variance dt") {
  auto g = std::make_shared<const TimeGrid>(make_grid(8, 8, {0.37}));
  const int N = 4000;
  std::vector<double> sq(N);
  const int k = g->T_index[0] - 1;  // step ending at the inserted point
  for (int i = 0; i < N; ++i) {
    BrownianPath p = sample_brownian(g, 1, i);
    sq[i] = p.increments[k] * p.increments[k] / g->dt(k);
  }
  CHECK(mean_se(sq).mean == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("non-dyadic refinement uses sequential bridges") {
  auto g = std::make_shared<const TimeGrid>(make_grid(5, 3, {}));
  CHECK(g->levels == -1);
  BrownianPath p = sample_brownian(g, 2, 0);
  CHECK(p.W.size() == 16);
  CHECK(sample_brownian(g, 2, 0).W == p.W);
}

TEST_CASE("continuous Euler freezes coefficients at coarse points") {
  DiffusionModel m = builtin_model(ModelKind::LinearSDE, {0.3, 0.1, 0.4, 0.2, 1.0});
  auto g = std::make_shared<const TimeGrid>(make_grid(4, 4, {}));
  BrownianPath p = sample_brownian(g, 1, 0);
  Eigen::VectorXd X = euler_path(m, p);
  double x = 1.0;
  for (int i = 0; i < 4; ++i) {
    const double dW = p.W[4 * (i + 1)] - p.W[4 * i];
    x += m.a(x) * 0.25 + m.b(x) * dW;
    CHECK(X[4 * (i + 1)] == doctest::Approx(x).epsilon(1e-13));
  }
}

TEST_CASE("Sigma is X / x0 for driftless GBM") {
  DiffusionModel m = builtin_model(ModelKind::GBM, {0.0, 0.3, 2.0});
  CoupledPaths c = simulate_coupled(m, std::make_shared<const TimeGrid>(make_grid(8, 8, {})), 4, 1);
  CHECK(c.reference_exact);
  for (int k = 0; k <= c.grid().steps(); ++k) {
    CHECK(c.Sigma[k] == doctest::Approx(c.X_ref[k] / 2.0).epsilon(1e-12));
    CHECK(c.Sigma_inv[k] * c.Sigma[k] == doctest::Approx(1.0));
  }
}

TEST_CASE("overflow is flagged") {
  DiffusionModel m = builtin_model(ModelKind::GBM, {2000.0, 0.1, 1.0});
  CoupledPaths c = simulate_coupled(m, std::make_shared<const TimeGrid>(make_grid(4, 2, {})), 1, 0);
  CHECK_FALSE(c.finite);
}

TEST_CASE("binary path dump round trip") {
  DiffusionModel m = builtin_model(ModelKind::OU, {1.0, 0.3, 0.5});
  auto g = std::make_shared<const TimeGrid>(make_grid(4, 2, {}));
  std::vector<CoupledPaths> ps{simulate_coupled(m, g, 1, 0), simulate_coupled(m, g, 1, 1)};
  std::stringstream ss;
  write_path_dump(ss, *g, ps);
  PathDump d = read_path_dump(ss);
  CHECK(d.n == 4);
  CHECK(d.m == 2);
  CHECK(d.count == 2);
  CHECK(d.times == g->times);
  CHECK(d.X_euler[1] == ps[1].X_euler);
  CHECK(d.W[0] == ps[0].path.W);
  std::stringstream bad("XXXX");
  CHECK_THROWS(read_path_dump(bad));
}
