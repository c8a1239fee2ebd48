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
#include "eulerexp/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

namespace eulerexp {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

MeanSE mean_se(const std::vector<double>& x) {
  MeanSE r;
  r.count = x.size();
  if (x.empty()) return r;
  r.mean = pairwise_sum(x) / static_cast<double>(x.size());
  if (x.size() > 1) {
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - r.mean) * (x[i] - r.mean);
    r.sd = std::sqrt(pairwise_sum(d) / static_cast<double>(x.size() - 1));
    r.se = r.sd / std::sqrt(static_cast<double>(x.size()));
  }
  return r;
}

namespace {

Quadrature golub_welsch(const Eigen::VectorXd& offdiag, double mass) {
  const Eigen::Index n = offdiag.size() + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) J(k, k + 1) = J(k + 1, k) = offdiag[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  q.nodes = es.eigenvalues();
  q.weights = mass * es.eigenvectors().row(0).transpose().array().square();
  return q;
}

}  // namespace

Quadrature gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1");
  if (n == 1) return {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(static_cast<double>(k));
  return golub_welsch(off, 1.0);
}

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  Quadrature q;
  if (n == 1) {
    q = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 2.0)};
  } else {
    Eigen::VectorXd off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    q = golub_welsch(off, 2.0);
  }
  q.nodes = (0.5 * (b - a)) * q.nodes.array() + 0.5 * (a + b);
  q.weights *= 0.5 * (b - a);
  return q;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& k, double& g) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  k = kWgk[7] * fc;
  g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * kXgk[j]), f2 = f(c + h * kXgk[j]);
    k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  k *= h;
  g *= h;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  double k, g;
  gk15(f, a, b, k, g);
  if (depth <= 0 || std::abs(k - g) <= tol) return k;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth - 1) + adapt(f, c, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  return adapt(f, a, b, tol, max_depth);
}

double silverman_bandwidth(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("bandwidth: need at least two points");
  std::vector<double> s = x;
  std::sort(s.begin(), s.end());
  auto quantile = [&](double p) {
    double pos = p * static_cast<double>(s.size() - 1);
    std::size_t i = static_cast<std::size_t>(pos);
    double fr = pos - static_cast<double>(i);
    return i + 1 < s.size() ? s[i] * (1 - fr) + s[i + 1] * fr : s[i];
  };
  double sd = mean_se(x).sd;
  double iqr = (quantile(0.75) - quantile(0.25)) / 1.34;
  double spread = iqr > 0 ? std::min(sd, iqr) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(x.size()), -0.2);
}

GaussianKde::GaussianKde(std::vector<double> sample, double bandwidth)
    : x_(std::move(sample)), h_(bandwidth) {
  if (x_.empty()) throw std::invalid_argument("kde: empty sample");
  if (!(h_ > 0)) throw std::invalid_argument("kde: degenerate bandwidth");
  std::sort(x_.begin(), x_.end());
  lo_ = x_.front();
  hi_ = x_.back();
}

double GaussianKde::operator()(double x) const {
  // Only points within 9 bandwidths contribute.
  auto lo = std::lower_bound(x_.begin(), x_.end(), x - 9 * h_);
  auto hi = std::upper_bound(x_.begin(), x_.end(), x + 9 * h_);
  double s = 0;
  for (auto it = lo; it != hi; ++it) s += normal_pdf((x - *it) / h_);
  return s / (h_ * static_cast<double>(x_.size()));
}

NadarayaWatson::NadarayaWatson(std::vector<double> x, std::vector<double> y, double bandwidth)
    : h_(bandwidth) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("regression: bad sample");
  if (!(h_ > 0)) throw std::invalid_argument("regression: degenerate bandwidth");
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  x_.reserve(x.size());
  y_.reserve(y.size());
  for (auto i : idx) {
    x_.push_back(x[i]);
    y_.push_back(y[i]);
  }
}

double NadarayaWatson::operator()(double x) const {
  auto lo = std::lower_bound(x_.begin(), x_.end(), x - 9 * h_);
  auto hi = std::upper_bound(x_.begin(), x_.end(), x + 9 * h_);
  double num = 0, den = 0;
  for (auto it = lo; it != hi; ++it) {
    double w = normal_pdf((x - *it) / h_);
    num += w * y_[static_cast<std::size_t>(it - x_.begin())];
    den += w;
  }
  if (den <= 0) {
    // Outside the sample: nearest observation.
    return x < x_.front() ? y_.front() : y_.back();
  }
  return num / den;
}

LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& w) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 2 || y.size() != x.size() || w.size() != x.size()) {
    throw std::invalid_argument("line fit: need matching inputs with at least two points");
  }
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n), sw(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sw[i] = std::sqrt(w[static_cast<std::size_t>(i)]);
    A(i, 0) = sw[i];
    A(i, 1) = sw[i] * x[static_cast<std::size_t>(i)];
    b[i] = sw[i] * y[static_cast<std::size_t>(i)];
  }
  Eigen::Vector2d beta = A.colPivHouseholderQr().solve(b);
  Eigen::Matrix2d cov = (A.transpose() * A).inverse();
  LineFit f;
  f.intercept = beta[0];
  f.slope = beta[1];
  f.intercept_se = std::sqrt(cov(0, 0));
  f.slope_se = std::sqrt(cov(1, 1));
  return f;
}

}  // namespace eulerexp
