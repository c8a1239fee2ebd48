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
#include <vector>

namespace eulerexp {

// Uniform fine grid k/(n m) plus any evaluation times that fall between
// fine points. Coarse points i/n are fine points by construction.
struct TimeGrid {
  int n = 1;
  int m = 1;
  std::vector<double> T_points;
  int root = 1;     // base step count of the Brownian construction
  int levels = -1;  // dyadic bisection levels, -1 for sequential bridges

  Eigen::VectorXd times;         // fine_times, strictly increasing on [0, 1]
  std::vector<int> coarse_left;  // per fine step: fine index of phi(t)
  std::vector<double> coarse_next;  // per fine step: next coarse time
  std::vector<int> coarse_index;    // per coarse point i: fine index
  std::vector<int> uniform_index;   // per uniform point k: fine index
  std::vector<int> T_index;         // per T point: fine index
  std::vector<int> inserted;        // fine indices of inserted T points

  int steps() const { return static_cast<int>(times.size()) - 1; }
  double dt(int k) const { return times[k + 1] - times[k]; }
  // Fine index of time t; throws if t is not a grid point.
  int index_of(double t) const;
};

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// root = 0 uses root = n. Dyadic nesting is used when n m / root is a
// power of two and root divides n.
TimeGrid make_grid(int n, int m, std::vector<double> T_points, int root = 0);

}  // namespace eulerexp
