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
#include <cmath>
#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <numbers>
#include <thread>
#include <vector>

namespace eulerexp {

template <class Scalar>
Scalar normal_pdf(Scalar x, Scalar var = Scalar(1)) {
  using std::exp;
  using std::sqrt;
  return exp(-x * x / (2 * var)) / sqrt(2 * std::numbers::pi_v<Scalar> * var);
}

double normal_cdf(double x);

// Pairwise (cascade) summation; result independent of thread schedule.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

struct MeanSE {
  double mean = 0;
  double se = 0;  // sample sd / sqrt(count)
  double sd = 0;
  std::size_t count = 0;
};

MeanSE mean_se(const std::vector<double>& x);

struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Nodes and weights for the standard normal weight: sum w f(x) ~ E f(Z).
Quadrature gauss_hermite(int n);
// Gauss-Legendre on [a, b].
Quadrature gauss_legendre(int n, double a, double b);

// Adaptive Gauss-Kronrod 7-15 on [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10, int max_depth = 40);

// Silverman's rule: 0.9 min(sd, IQR/1.34) n^{-1/5}.
double silverman_bandwidth(const std::vector<double>& x);

// Gaussian kernel density estimate on the given sample.
class GaussianKde {
 public:
  GaussianKde() = default;
  GaussianKde(std::vector<double> sample, double bandwidth);
  double operator()(double x) const;
  double bandwidth() const { return h_; }
  double min() const { return lo_; }
  double max() const { return hi_; }

 private:
  std::vector<double> x_;  // sorted
  double h_ = 1, lo_ = 0, hi_ = 0;
};

// Nadaraya-Watson regression with a Gaussian kernel.
class NadarayaWatson {
 public:
  NadarayaWatson() = default;
  NadarayaWatson(std::vector<double> x, std::vector<double> y, double bandwidth);
  double operator()(double x) const;

 private:
  std::vector<double> x_, y_;  // sorted by x
  double h_ = 1;
};

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
  double intercept_se = 0;
};

// Weighted least squares y = intercept + slope x with known weights 1/var.
LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& w);

// Runs fn(i) for i in [0, count) on `workers` threads, strided. The
// exception of the lowest failing index is rethrown after all threads join.
template <class F>
void parallel_for(std::size_t count, int workers, F&& fn) {
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::vector<std::exception_ptr> errors(nw);
  std::vector<std::size_t> error_index(nw, count);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += nw) {
        try {
          fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
          error_index[w] = i;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::size_t best = nw;
  for (std::size_t w = 0; w < nw; ++w) {
    if (errors[w] && (best == nw || error_index[w] < error_index[best])) best = w;
  }
  if (best < nw) std::rethrow_exception(errors[best]);
}

}  // namespace eulerexp
