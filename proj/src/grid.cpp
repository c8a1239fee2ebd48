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
#include "eulerexp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eulerexp {

namespace {

bool is_pow2(long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

int TimeGrid::index_of(double t) const {
  const double* begin = times.data();
  const double* end = begin + times.size();
  const double* it = std::lower_bound(begin, end, t - 1e-12);
  if (it == end || std::abs(*it - t) > 1e-12) {
    throw GridError("time " + std::to_string(t) + " is not a grid point");
  }
  return static_cast<int>(it - begin);
}

TimeGrid make_grid(int n, int m, std::vector<double> T_points, int root) {
  if (n < 1) throw GridError("n must be >= 1");
  if (m < 1) throw GridError("m must be >= 1");
  for (double T : T_points) {
    if (!(T > 0 && T <= 1)) throw GridError("T points must lie in (0, 1]");
  }
  std::sort(T_points.begin(), T_points.end());
  T_points.erase(std::unique(T_points.begin(), T_points.end()), T_points.end());

  TimeGrid g;
  g.n = n;
  g.m = m;
  g.T_points = T_points;
  g.root = root > 0 ? root : n;
  const long nm = static_cast<long>(n) * m;
  if (n % g.root == 0 && nm % g.root == 0 && is_pow2(nm / g.root)) {
    g.levels = 0;
    for (long r = nm / g.root; r > 1; r >>= 1) ++g.levels;
  } else {
    g.root = n;
    g.levels = is_pow2(m) ? static_cast<int>(std::log2(m) + 0.5) : -1;
  }

  // Merge uniform points with off-grid T points.
  std::vector<double> t;
  t.reserve(nm + 1 + T_points.size());
  std::size_t jt = 0;
  g.uniform_index.resize(nm + 1);
  for (long k = 0; k <= nm; ++k) {
    double tk = static_cast<double>(k) / static_cast<double>(nm);
    while (jt < T_points.size() && T_points[jt] < tk - 1e-12) {
      g.inserted.push_back(static_cast<int>(t.size()));
      t.push_back(T_points[jt++]);
    }
    if (jt < T_points.size() && std::abs(T_points[jt] - tk) <= 1e-12) ++jt;
    g.uniform_index[k] = static_cast<int>(t.size());
    t.push_back(tk);
  }
  g.times = Eigen::Map<Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));

  g.coarse_index.resize(n + 1);
  for (int i = 0; i <= n; ++i) g.coarse_index[i] = g.uniform_index[static_cast<long>(i) * m];
  const int N = g.steps();
  g.coarse_left.resize(N);
  g.coarse_next.resize(N);
  int i = 0;
  for (int k = 0; k < N; ++k) {
    while (i + 1 < n && g.coarse_index[i + 1] <= k) ++i;
    g.coarse_left[k] = g.coarse_index[i];
    g.coarse_next[k] = g.times[g.coarse_index[i + 1]];
  }
  for (double T : T_points) g.T_index.push_back(g.index_of(T));
  return g;
}

}  // namespace eulerexp
