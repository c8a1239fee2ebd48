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
#include <sstream>
#include <vector>

#include "doctest.h"
#include "eulerexp/experiments.hpp"
#include "eulerexp/symbol.hpp"

using namespace eulerexp;

TEST_CASE("rate regression") {
  std::vector<double> n{16, 32, 64, 128}, y;
  for (double k : n) y.push_back(3.0 / std::sqrt(k));
  LineFit f = rate_regression(n, y);
  CHECK(std::abs(f.slope + 0.5) < 1e-12);
  CHECK_THROWS(rate_regression({16, 32}, {1, 2}));
  CHECK_THROWS(rate_regression({16, 32, 64}, {1, 0, 2}));
  CHECK_THROWS(rate_regression({16, 32, 64}, {1, -1, 2}));
  LineFit w = rate_regression(n, y, {0.01, 0.01, 0.01, 0.01});
  CHECK(std::abs(w.slope + 0.5) < 1e-12);
}

TEST_CASE("test functions") {
  TestFunction f = parse_test_function("x^2");
  CHECK(f.f(3.0) == 9.0);
  CHECK(f.d1(3.0) == 6.0);
  CHECK(f.d2(3.0) == 2.0);
  CHECK(f.d3(3.0) == 0.0);
  TestFunction g = parse_test_function("1{x<=0.5}");
  CHECK(g.f(0.5) == 1.0);
  CHECK(g.f(0.6) == 0.0);
  CHECK(!g.d1);
  CHECK_THROWS(parse_test_function("sin(x)"));
}

namespace {
Campaign small(DiffusionModel m, int M = 200) {
  Campaign c;
  c.model = std::move(m);
  c.n_list = {4, 8, 16};
  c.m = 2;
  c.M = M;
  c.seed = 7;
  return c;
}
}  // namespace

TEST_CASE("weak error rejects functions without derivatives") {
  CHECK_THROWS(weak_error(small(builtin_model(ModelKind::GBM, {0.0, 0.2, 1.0})),
                          indicator_function(1.0)));
}

TEST_CASE("weak error of f(x) = x on Brownian motion is zero") {
  WeakResult r = weak_error(small(builtin_model(ModelKind::ConstDiff, {0, 0.5, 1.0})),
                            power_function(1), false);
  for (const auto& row : r.rows) CHECK(std::abs(row.empirical) < 1e-14);
}

TEST_CASE("strong prediction is undefined for a degenerate model") {
  Campaign c = small(builtin_model(ModelKind::ConstDiff, {1, 0.5, 1.0}));
  CHECK_THROWS_AS(strong_error(c, 2.0), DegenerateModelError);
  StrongResult r = strong_error(c, 2.0, false);
  CHECK(r.rows.size() == 3);
  CHECK(std::isnan(r.rows[0].predicted));
}

TEST_CASE("campaign outputs do not depend on the worker count") {
  Campaign c = small(builtin_model(ModelKind::LinearSDE, {0.3, 0.1, 0.4, 0.2, 1.0}), 64);
  std::ostringstream a, b;
  write_csv(a, to_table(limit_variance(c)));
  c.workers = 3;
  write_csv(b, to_table(limit_variance(c)));
  CHECK(a.str() == b.str());
}

TEST_CASE("CSV format") {
  Table t{{"n", "v"}, {{16, 0.1}, {32, 1.0 / 3}}, {}};
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "n,v\n16,0.10000000000000001\n32,0.33333333333333331\n");
  Table l{{"name", "z"}, {{1.5}}, {"M.M"}};
  std::ostringstream ol;
  write_csv(ol, l);
  CHECK(ol.str() == "name,z\nM.M,1.5\n");
}
