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
#include "eulerexp/pathsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "eulerexp/rng.hpp"

namespace eulerexp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Brownian values on the uniform grid k/(n m), k = 0..n m.
Eigen::VectorXd uniform_brownian(const TimeGrid& g, std::uint64_t seed,
                                 std::uint64_t stream) {
  const long nm = static_cast<long>(g.n) * g.m;
  Eigen::VectorXd w(nm + 1);
  if (g.levels >= 0) {
    const long R = g.root;
    // Root level, stored with stride nm / R.
    const long stride0 = nm / R;
    NormalSequence root(seed, stream, RngDomain::Root, 0);
    w[0] = 0.0;
    const double sr = std::sqrt(1.0 / static_cast<double>(R));
    for (long j = 0; j < R; ++j) w[(j + 1) * stride0] = w[j * stride0] + sr * root(j);
    long stride = stride0;
    for (int lev = 1; lev <= g.levels; ++lev) {
      const long half = stride / 2;
      const double len = static_cast<double>(stride) / static_cast<double>(nm);
      const double sd = std::sqrt(len / 4.0);
      NormalSequence z(seed, stream, RngDomain::Bisection, lev);
      for (long i = 0, a = 0; a < nm; ++i, a += stride) {
        w[a + half] = 0.5 * (w[a] + w[a + stride]) + sd * z(i);
      }
      stride = half;
    }
  } else {
    const int n = g.n, m = g.m;
    NormalSequence root(seed, stream, RngDomain::Root, 0);
    NormalSequence z(seed, stream, RngDomain::Bridge, 0);
    const double h = 1.0 / n;
    const double dlt = h / m;
    w[0] = 0.0;
    for (int i = 0; i < n; ++i) w[static_cast<long>(i + 1) * m] = w[static_cast<long>(i) * m] + std::sqrt(h) * root(i);
    for (int i = 0; i < n; ++i) {
      const long a = static_cast<long>(i) * m, b = a + m;
      for (int j = 1; j < m; ++j) {
        const double rem = (m - j + 1) * dlt;
        const double mean = w[a + j - 1] + (dlt / rem) * (w[b] - w[a + j - 1]);
        const double sd = std::sqrt(dlt * (rem - dlt) / rem);
        w[a + j] = mean + sd * z(static_cast<std::uint64_t>(a + j));
      }
    }
  }
  return w;
}

}  // namespace

double CoupledPaths::sqrt_n() const { return std::sqrt(static_cast<double>(grid().n)); }

void refresh_cumulative(BrownianPath& path) {
  const auto N = path.increments.size();
  path.W.resize(N + 1);
  path.W[0] = 0.0;
  for (Eigen::Index k = 0; k < N; ++k) path.W[k + 1] = path.W[k] + path.increments[k];
}

BrownianPath sample_brownian(std::shared_ptr<const TimeGrid> grid, std::uint64_t seed,
                             std::uint64_t stream) {
  const TimeGrid& g = *grid;
  Eigen::VectorXd wu = uniform_brownian(g, seed, stream);
  BrownianPath p;
  p.seed = seed;
  p.stream = stream;
  const int N = g.steps();
  p.W.resize(N + 1);
  for (std::size_t k = 0; k < g.uniform_index.size(); ++k) p.W[g.uniform_index[k]] = wu[static_cast<Eigen::Index>(k)];
  NormalSequence z(seed, stream, RngDomain::Insert, 0);
  for (std::size_t j = 0; j < g.inserted.size(); ++j) {
    const int k = g.inserted[j];
    // Bridge from the previous (already sampled) point to the next uniform point.
    int a = k - 1, b = k + 1;
    while (b <= N && std::find(g.inserted.begin(), g.inserted.end(), b) != g.inserted.end()) ++b;
    const double ta = g.times[a], tb = g.times[b], t = g.times[k];
    const double mean = p.W[a] + (t - ta) / (tb - ta) * (p.W[b] - p.W[a]);
    const double sd = std::sqrt((t - ta) * (tb - t) / (tb - ta));
    p.W[k] = mean + sd * z(j);
  }
  p.increments = p.W.tail(N) - p.W.head(N);
  p.grid = std::move(grid);
  return p;
}

Eigen::VectorXd euler_path(const DiffusionModel& model, const BrownianPath& path,
                           bool* finite, std::vector<Jet>* coarse_jet) {
  const TimeGrid& g = *path.grid;
  const int N = g.steps();
  Eigen::VectorXd x(N + 1);
  x[0] = model.x0;
  if (coarse_jet) coarse_jet->assign(g.n, Jet{});
  Jet j;
  int ci = -1;
  bool ok = true;
  for (int k = 0; k < N; ++k) {
    if (g.coarse_left[k] == k) {
      j = model.jet(x[k]);
      ++ci;
      if (coarse_jet) (*coarse_jet)[ci] = j;
    }
    x[k + 1] = x[k] + j.a * g.dt(k) + j.b * path.increments[k];
    if (!std::isfinite(x[k + 1])) {
      ok = false;
      x.tail(N - k).setConstant(kNaN);
      break;
    }
  }
  if (finite) *finite = ok;
  return x;
}

Eigen::VectorXd reference_path(const DiffusionModel& model, const BrownianPath& path,
                               bool* exact, bool* finite) {
  const TimeGrid& g = *path.grid;
  const int N = g.steps();
  Eigen::VectorXd x(N + 1);
  x[0] = model.x0;
  const bool has_exact = model.has_exact_solution();
  bool ok = true;
  for (int k = 0; k < N; ++k) {
    if (has_exact) {
      x[k + 1] = model.exact_step(x[k], g.dt(k), path.increments[k]).value;
    } else {
      Jet j = model.jet(x[k]);
      x[k + 1] = x[k] + j.a * g.dt(k) + j.b * path.increments[k];
    }
    if (!std::isfinite(x[k + 1])) {
      ok = false;
      x.tail(N - k).setConstant(kNaN);
      break;
    }
  }
  if (exact) *exact = has_exact;
  if (finite) *finite = ok;
  return x;
}

Eigen::VectorXd sigma_path(const DiffusionModel& model, const CoupledPaths& coupled,
                           bool* finite) {
  const TimeGrid& g = coupled.grid();
  const int N = g.steps();
  Eigen::VectorXd s(N + 1);
  const bool have_jets = static_cast<int>(coupled.ref_jet.size()) == N + 1;
  double e = 0.0;
  s[0] = 1.0;
  bool ok = true;
  for (int k = 0; k < N; ++k) {
    Jet j = have_jets ? coupled.ref_jet[k] : model.jet(coupled.X_ref[k]);
    e += j.b1 * coupled.path.increments[k] + (j.a1 - 0.5 * j.b1 * j.b1) * g.dt(k);
    s[k + 1] = std::exp(e);
    if (!std::isfinite(s[k + 1]) || s[k + 1] <= 0.0) ok = false;
  }
  if (finite) *finite = ok;
  return s;
}

CoupledPaths simulate_coupled(const DiffusionModel& model, BrownianPath path) {
  CoupledPaths c;
  c.model = &model;
  c.path = std::move(path);
  bool f1 = true, f2 = true, f3 = true;
  c.X_ref = reference_path(model, c.path, &c.reference_exact, &f1);
  c.X_euler = euler_path(model, c.path, &f2, &c.coarse_jet);
  const int N = c.grid().steps();
  c.ref_jet.resize(N + 1);
  if (f1) {
    for (int k = 0; k <= N; ++k) c.ref_jet[k] = model.jet(c.X_ref[k]);
  }
  c.Sigma = sigma_path(model, c, &f3);
  c.Sigma_inv = c.Sigma.cwiseInverse();
  c.finite = f1 && f2 && f3;
  return c;
}

CoupledPaths simulate_coupled(const DiffusionModel& model,
                              std::shared_ptr<const TimeGrid> grid, std::uint64_t seed,
                              std::uint64_t stream) {
  return simulate_coupled(model, sample_brownian(std::move(grid), seed, stream));
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("path dump: truncated input");
  return v;
}

void put_vec(std::ostream& os, const Eigen::VectorXd& v) {
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Eigen::VectorXd get_vec(std::istream& is, std::uint64_t len) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(len));
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(len * sizeof(double)));
  if (!is) throw std::runtime_error("path dump: truncated input");
  return v;
}

}  // namespace

void write_path_dump(std::ostream& os, const TimeGrid& grid,
                     const std::vector<CoupledPaths>& paths) {
  os.write("EWP1", 4);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(grid.n));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(grid.m));
  put<std::uint64_t>(os, paths.size());
  put<std::uint64_t>(os, static_cast<std::uint64_t>(grid.times.size()));
  put_vec(os, grid.times);
  for (const auto& c : paths) {
    put_vec(os, c.path.W);
    put_vec(os, c.X_ref);
    put_vec(os, c.X_euler);
  }
}

PathDump read_path_dump(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "EWP1", 4) != 0) {
    throw std::runtime_error("path dump: bad magic");
  }
  PathDump d;
  d.n = get<std::uint64_t>(is);
  d.m = get<std::uint64_t>(is);
  d.count = get<std::uint64_t>(is);
  auto points = get<std::uint64_t>(is);
  d.times = get_vec(is, points);
  for (std::uint64_t i = 0; i < d.count; ++i) {
    d.W.push_back(get_vec(is, points));
    d.X_ref.push_back(get_vec(is, points));
    d.X_euler.push_back(get_vec(is, points));
  }
  return d;
}

}  // namespace eulerexp
