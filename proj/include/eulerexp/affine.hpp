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
#include <functional>

#include "eulerexp/pathsim.hpp"

namespace eulerexp {

// dY = (c Y + ct) dt + (d Y + dt_) dW with deterministic time-dependent
// coefficients, Y_0 = y0.
struct AffineSde {
  std::function<double(double)> c, ct, d, dt_;
  double y0 = 0;
};

// Y = Sigma [y0 + int Sigma^{-1}((ct - d dt_) ds + dt_ dW)], with
// Sigma = exp(int d dW + int (c - d^2/2) ds); left-point sums on the path grid.
Eigen::VectorXd affine_explicit(const AffineSde& sde, const BrownianPath& path);

// Direct Euler scheme of the same SDE on the path grid.
Eigen::VectorXd affine_euler(const AffineSde& sde, const BrownianPath& path);

struct AffineGap {
  int steps = 0;
  double rms = 0;     // RMS over paths of max_t |explicit - euler|
  double rms_se = 0;
};

// Gaps at `steps` and 2 * steps on nested paths; the ratio is coarse / fine.
struct AffineGapPair {
  AffineGap coarse, fine;
  double ratio() const { return coarse.rms / fine.rms; }
};
AffineGapPair affine_gap(const AffineSde& sde, int steps, std::size_t paths,
                         std::uint64_t seed, int workers = 1);

}  // namespace eulerexp
