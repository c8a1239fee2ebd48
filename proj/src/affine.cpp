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
#include "eulerexp/affine.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "eulerexp/grid.hpp"
#include "eulerexp/numerics.hpp"

namespace eulerexp {

Eigen::VectorXd affine_explicit(const AffineSde& s, const BrownianPath& path) {
  const TimeGrid& g = *path.grid;
  const int N = g.steps();
  Eigen::VectorXd Y(N + 1);
  double logS = 0, I = 0;
  Y[0] = s.y0;
  for (int k = 0; k < N; ++k) {
    const double t = g.times[k], h = g.dt(k), dw = path.increments[k];
    const double c = s.c(t), ct = s.ct(t), d = s.d(t), dt = s.dt_(t);
    const double inv = std::exp(-logS);
    I += inv * ((ct - d * dt) * h + dt * dw);
    logS += d * dw + (c - 0.5 * d * d) * h;
    Y[k + 1] = std::exp(logS) * (s.y0 + I);
  }
  return Y;
}

Eigen::VectorXd affine_euler(const AffineSde& s, const BrownianPath& path) {
  const TimeGrid& g = *path.grid;
  const int N = g.steps();
  Eigen::VectorXd Y(N + 1);
  Y[0] = s.y0;
  for (int k = 0; k < N; ++k) {
    const double t = g.times[k], h = g.dt(k), dw = path.increments[k];
    Y[k + 1] = Y[k] + (s.c(t) * Y[k] + s.ct(t)) * h + (s.d(t) * Y[k] + s.dt_(t)) * dw;
  }
  return Y;
}

AffineGapPair affine_gap(const AffineSde& sde, int steps, std::size_t paths,
                         std::uint64_t seed, int workers) {
  AffineGapPair out;
  for (int level = 0; level < 2; ++level) {
    auto g = std::make_shared<const TimeGrid>(make_grid(steps, 1 << level, {}, steps));
    std::vector<double> sq(paths);
    parallel_for(paths, workers, [&](std::size_t i) {
      BrownianPath p = sample_brownian(g, seed, i);
      const double gap = (affine_explicit(sde, p) - affine_euler(sde, p)).cwiseAbs().maxCoeff();
      sq[i] = gap * gap;
    });
    MeanSE ms = mean_se(sq);
    AffineGap& r = level == 0 ? out.coarse : out.fine;
    r.steps = steps << level;
    r.rms = std::sqrt(ms.mean);
    r.rms_se = ms.mean > 0 ? 0.5 * ms.se / r.rms : 0.0;
  }
  return out;
}

}  // namespace eulerexp
