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
#include <iosfwd>
#include <memory>
#include <vector>

#include "eulerexp/grid.hpp"
#include "eulerexp/model.hpp"

namespace eulerexp {

struct BrownianPath {
  std::shared_ptr<const TimeGrid> grid;
  Eigen::VectorXd increments;  // per fine step
  Eigen::VectorXd W;           // cumulative, W[0] = 0
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Rebuilds W from increments (after a manual edit such as a bump).
void refresh_cumulative(BrownianPath& path);

BrownianPath sample_brownian(std::shared_ptr<const TimeGrid> grid,
                             std::uint64_t seed, std::uint64_t stream);

struct CoupledPaths {
  const DiffusionModel* model = nullptr;  // must outlive this object
  BrownianPath path;
  Eigen::VectorXd X_ref;
  Eigen::VectorXd X_euler;
  Eigen::VectorXd Sigma;
  Eigen::VectorXd Sigma_inv;
  std::vector<Jet> ref_jet;     // model jet along X_ref, per fine point
  std::vector<Jet> coarse_jet;  // model jet at X_euler of each coarse point
  bool reference_exact = false;
  bool finite = true;

  const TimeGrid& grid() const { return *path.grid; }
  double sqrt_n() const;
};

// Continuous Euler scheme: coefficients frozen at the coarse left point.
// Sets *finite to false (and fills NaN) on overflow.
Eigen::VectorXd euler_path(const DiffusionModel& model, const BrownianPath& path,
                           bool* finite = nullptr,
                           std::vector<Jet>* coarse_jet = nullptr);

// Exact solution on the fine grid if the model has one, else fine Euler.
Eigen::VectorXd reference_path(const DiffusionModel& model, const BrownianPath& path,
                               bool* exact = nullptr, bool* finite = nullptr);

// Sigma_t = exp(int b'(X) dW + int (a' - b'^2/2)(X) ds), left-point sums.
Eigen::VectorXd sigma_path(const DiffusionModel& model, const CoupledPaths& coupled,
                           bool* finite = nullptr);

CoupledPaths simulate_coupled(const DiffusionModel& model, BrownianPath path);
CoupledPaths simulate_coupled(const DiffusionModel& model,
                              std::shared_ptr<const TimeGrid> grid,
                              std::uint64_t seed, std::uint64_t stream);

// Binary dump: "EWP1", u64 n, u64 m, u64 count, u64 points, the fine times,
// then per path W, X_ref, X_euler; little-endian doubles.
void write_path_dump(std::ostream& os, const TimeGrid& grid,
                     const std::vector<CoupledPaths>& paths);

struct PathDump {
  std::uint64_t n = 0, m = 0, count = 0;
  Eigen::VectorXd times;
  std::vector<Eigen::VectorXd> W, X_ref, X_euler;
};

PathDump read_path_dump(std::istream& is);

}  // namespace eulerexp
