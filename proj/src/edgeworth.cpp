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
#include "eulerexp/edgeworth.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace eulerexp {

void write_density_csv(std::ostream& os, const std::string& first_columns,
                       const std::vector<DensityRow>& rows) {
  os << first_columns << ",correction,total,rectified,stderr\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.x << ',' << r.order0 << ',' << r.correction << ',' << r.total << ','
       << r.rectified << ',' << r.stderr_ << '\n';
  }
}

const std::array<MonomialEntry, 7>& monomial_table() {
  static const std::array<MonomialEntry, 7> t{{{1, 0, 2, 3},
                                               {2, 0, 0, 1},
                                               {1, 1, 5, 0},
                                               {3, 0, 4, 0},
                                               {1, 2, 7, 0},
                                               {3, 1, 8, 0},
                                               {5, 0, 6, 0}}};
  return t;
}

StudentizedMoments studentized_moments(const std::vector<SymbolCoefficients>& sample) {
  StudentizedMoments m;
  m.count = sample.size();
  if (sample.empty()) throw std::invalid_argument("studentized moments: empty sample");
  std::array<std::vector<double>, 3> q;
  for (auto& v : q) v.resize(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& s = sample[i];
    const double c = s.C;
    const double r1 = 1.0 / std::sqrt(c), r3 = r1 / c, r5 = r3 / c;
    q[0][i] = (s.H[2] - 3 * s.H[1]) * r1 - 0.5 * s.H[5] * r3 + 3 * s.H[6] * r5;
    q[1][i] = s.H[3];
    q[2][i] = s.H[1] * r1;
    for (int a = 0; a < 3; ++a) {
      if (!std::isfinite(q[a][i])) {
        throw DegenerateModelError("studentized moments: non-finite value (degenerate C)");
      }
    }
  }
  std::vector<double> prod(sample.size());
  for (int a = 0; a < 3; ++a) m.mean[a] = pairwise_sum(q[a]) / static_cast<double>(sample.size());
  if (sample.size() > 1) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b <= a; ++b) {
        for (std::size_t i = 0; i < sample.size(); ++i) {
          prod[i] = (q[a][i] - m.mean[a]) * (q[b][i] - m.mean[b]);
        }
        m.cov(a, b) = m.cov(b, a) = pairwise_sum(prod) / static_cast<double>(sample.size() - 1);
      }
    }
  }
  return m;
}

StudentizedCoefficients studentized_coeffs(const StudentizedMoments& m) {
  if (!m.mean.allFinite() || !m.cov.allFinite()) {
    throw DegenerateModelError("studentized coefficients: non-finite moments");
  }
  StudentizedCoefficients a;
  a.a1 = m.mean[0];
  a.a2 = m.mean[1];
  a.a3 = m.mean[2];
  a.cov_mean = m.count > 0 ? Eigen::Matrix3d(m.cov / static_cast<double>(m.count))
                           : Eigen::Matrix3d::Zero();
  a.se1 = std::sqrt(a.cov_mean(0, 0));
  a.se2 = std::sqrt(a.cov_mean(1, 1));
  a.se3 = std::sqrt(a.cov_mean(2, 2));
  return a;
}

double studentized_density(const StudentizedCoefficients& a, double n, double y) {
  const double corr = a.a1 * y + a.a2 * (y * y - 1) + a.a3 * y * y * y;
  return normal_pdf(y) * (1 + corr / std::sqrt(n));
}

double studentized_cdf(const StudentizedCoefficients& a, double n, double y) {
  return normal_cdf(y) - normal_pdf(y) * (a.a1 + a.a2 * y + a.a3 * (y * y + 2)) / std::sqrt(n);
}

StudentizedDensity::StudentizedDensity(StudentizedCoefficients a, double n) : a_(a), n_(n) {
  if (!(n >= 1)) throw std::invalid_argument("studentized density: n >= 1");
  auto pos = [this](double y) { return std::max(0.0, studentized_density(a_, n_, y)); };
  for (double y = -8; y <= 8; y += 0.01) {
    if (studentized_density(a_, n_, y) < 0) negative_ = true;
  }
  rect_norm_ = negative_ ? integrate_adaptive(pos, -12, 12, 1e-12) : 1.0;
}

DensityRow StudentizedDensity::evaluate(double y) const {
  DensityRow r;
  r.x = y;
  r.order0 = normal_pdf(y);
  r.total = studentized_density(a_, n_, y);
  r.correction = r.total - r.order0;
  r.rectified = std::max(0.0, r.total) / rect_norm_;
  Eigen::Vector3d g(y, y * y - 1, y * y * y);
  r.stderr_ = r.order0 * std::sqrt(std::max(0.0, g.dot(a_.cov_mean * g))) / std::sqrt(n_);
  return r;
}

std::vector<DensityRow> StudentizedDensity::table(const Eigen::VectorXd& ys) const {
  std::vector<DensityRow> rows;
  for (double y : ys) rows.push_back(evaluate(y));
  return rows;
}

std::vector<double> neg_derivative_poly(const std::vector<double>& P, double S, int r) {
  std::vector<double> cur = P;
  for (int it = 0; it < r; ++it) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t d = 0; d < cur.size(); ++d) {
      next[d + 1] += cur[d] / S;                                   // v P / S
      if (d > 0) next[d - 1] -= static_cast<double>(d) * cur[d];  // -P'
    }
    cur = std::move(next);
  }
  return cur;
}

double poly_eval(const std::vector<double>& P, double v) {
  double s = 0;
  for (std::size_t d = P.size(); d-- > 0;) s = s * v + P[d];
  return s;
}

PairIngredients sample_ingredients(const std::vector<SymbolCoefficients>& sample,
                                   double* log_bandwidth) {
  std::vector<double> u(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!(sample[i].C > 0)) throw DegenerateModelError("pair density: C must be positive");
    u[i] = std::log(sample[i].C);
  }
  const double bw = silverman_bandwidth(u);
  if (!(bw > 0)) throw std::invalid_argument("pair density: degenerate bandwidth");
  if (log_bandwidth) *log_bandwidth = bw;
  auto kde = std::make_shared<GaussianKde>(u, bw);
  auto reg = std::make_shared<std::array<NadarayaWatson, 9>>();
  for (int j = 1; j <= 8; ++j) {
    std::vector<double> y(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) y[i] = sample[i].H[j];
    (*reg)[j] = NadarayaWatson(u, std::move(y), bw);
  }
  PairIngredients ing;
  ing.pC = [kde](double x) { return x > 0 ? (*kde)(std::log(x)) / x : 0.0; };
  ing.cond = [reg](int j, double x) { return (*reg)[j](std::log(x)); };
  return ing;
}

PairDensity::PairDensity(const std::vector<SymbolCoefficients>& sample, double n) : n_(n) {
  if (sample.empty()) throw std::invalid_argument("pair density: empty sample");
  std::vector<double> c(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) c[i] = sample[i].C;
  MeanSE ms = mean_se(c);
  if (!(ms.mean > 0)) throw DegenerateModelError("pair density: C vanishes");
  if (ms.sd < 1e-10 * std::max(1.0, ms.mean)) {
    deterministic_ = true;
    C0_ = ms.mean;
    for (int j = 1; j <= 8; ++j) {
      std::vector<double> h(sample.size());
      for (std::size_t i = 0; i < sample.size(); ++i) h[i] = sample[i].H[j];
      Hbar_[j] = pairwise_sum(h) / static_cast<double>(h.size());
    }
    lo_ = hi_ = C0_;
    return;
  }
  ing_ = sample_ingredients(sample, &bw_);
  fd_ = 0.2 * bw_;
  auto [mn, mx] = std::minmax_element(c.begin(), c.end());
  lo_ = std::exp(std::log(*mn) - 8 * bw_);
  hi_ = std::exp(std::log(*mx) + 8 * bw_);
}

PairDensity::PairDensity(PairIngredients ing, double n, double fd_step, double lo, double hi)
    : ing_(std::move(ing)), n_(n), fd_(fd_step), lo_(lo), hi_(hi) {
  if (!(lo > 0 && hi > lo)) throw std::invalid_argument("pair density: support must satisfy 0 < lo < hi");
}

double PairDensity::order0(double z, double x) const {
  if (deterministic_) throw DegenerateModelError("pair density: C is deterministic; use z_density");
  if (!(x > 0)) return 0.0;
  return normal_pdf(z, x) * ing_.pC(x);
}

double PairDensity::base(int j, double z, double x) const {
  const MonomialEntry& e = monomial_table()[j - 1];
  const double A = e.h0 ? ing_.cond(e.h0, x) : 0.0;
  const double B = e.h1 ? ing_.cond(e.h1, x) : 0.0;
  std::vector<double> P = neg_derivative_poly({A, B}, x, e.m);
  return poly_eval(P, z) * normal_pdf(z, x) * ing_.pC(x);
}

double PairDensity::term(int j, double z, double x) const {
  if (deterministic_) throw DegenerateModelError("pair density: C is deterministic; use z_density");
  if (!(x > 0)) return 0.0;
  const MonomialEntry& e = monomial_table()[j - 1];
  const double d = fd_ * x;
  switch (e.n) {
    case 0: return base(j, z, x);
    case 1: return -(base(j, z, x + d) - base(j, z, x - d)) / (2 * d);
    default: return (base(j, z, x + d) - 2 * base(j, z, x) + base(j, z, x - d)) / (d * d);
  }
}

double PairDensity::correction_raw(double z, double x) const {
  double s = 0;
  for (int j = 1; j <= 7; ++j) s += term(j, z, x);
  return s;
}

double PairDensity::z_density(double z) const {
  if (deterministic_) {
    double corr = 0;
    for (int j = 1; j <= 7; ++j) {
      const MonomialEntry& e = monomial_table()[j - 1];
      if (e.n != 0) continue;  // x-derivatives integrate to zero
      const double A = e.h0 ? Hbar_[e.h0] : 0.0;
      const double B = e.h1 ? Hbar_[e.h1] : 0.0;
      corr += poly_eval(neg_derivative_poly({A, B}, C0_, e.m), z);
    }
    return normal_pdf(z, C0_) * (1 + corr / std::sqrt(n_));
  }
  auto f = [&](double u) {
    const double x = std::exp(u);
    double v = normal_pdf(z, x) * ing_.pC(x);
    double corr = 0;
    for (int j = 1; j <= 7; ++j) {
      if (monomial_table()[j - 1].n == 0) corr += base(j, z, x);
    }
    return x * (v + corr / std::sqrt(n_));
  };
  return integrate_adaptive(f, std::log(lo_), std::log(hi_), 1e-10);
}

MarginalVDensity::MarginalVDensity(const std::vector<MarginalSample>& sample, double n) : n_(n) {
  if (sample.empty()) throw std::invalid_argument("marginal density: empty sample");
  double sum_s = 0;
  for (const auto& s : sample) {
    const double S = s.Sigma * s.Sigma * s.C;
    if (!(S > 0) || !(s.Sigma > 0)) {
      throw DegenerateModelError("marginal density: degenerate conditional variance");
    }
    sum_s += S;
    Component c{S, {}};
    for (const auto& t : s.symbol.terms()) {
      if (t.nv[1] != 0) throw std::invalid_argument("marginal density: one functional only");
      const int m = t.m, k = t.nv[0];
      for (int l = 0; l <= std::min(m, k); ++l) {
        double binom = 1, fall = 1;
        for (int i = 0; i < l; ++i) {
          binom = binom * (m - i) / (i + 1);
          fall *= (k - i);
        }
        const double kappa = binom * fall * std::pow(s.Sigma, m - l);
        std::vector<double> P(k - l + 2, 0.0);
        P[k - l] = t.c0 / std::pow(s.Sigma, k - l);
        P[k - l + 1] = t.c1 / std::pow(s.Sigma, k - l + 1);
        std::vector<double> D = neg_derivative_poly(P, S, k + m - l);
        if (D.size() > c.poly.size()) c.poly.resize(D.size(), 0.0);
        for (std::size_t d = 0; d < D.size(); ++d) c.poly[d] += kappa * D[d];
      }
    }
    comp_.push_back(std::move(c));
  }
  scale_ = std::sqrt(sum_s / static_cast<double>(sample.size()));
}

DensityRow MarginalVDensity::evaluate(double v) const {
  const std::size_t M = comp_.size();
  std::vector<double> f0(M), f1(M), tot(M);
  const double rn = 1.0 / std::sqrt(n_);
  for (std::size_t i = 0; i < M; ++i) {
    const double ph = normal_pdf(v, comp_[i].S);
    f0[i] = ph;
    f1[i] = ph * poly_eval(comp_[i].poly, v);
    tot[i] = f0[i] + rn * f1[i];
  }
  DensityRow r;
  r.x = v;
  r.order0 = pairwise_sum(f0) / static_cast<double>(M);
  r.correction = rn * pairwise_sum(f1) / static_cast<double>(M);
  r.total = r.order0 + r.correction;
  r.rectified = std::max(0.0, r.total);
  r.stderr_ = mean_se(tot).se;
  return r;
}

std::array<double, 2> MarginalVDensity::abs_moment(double p) const {
  auto mp = [](double q) {
    return std::pow(2.0, q / 2) * std::tgamma((q + 1) / 2) / std::sqrt(std::numbers::pi);
  };
  const std::size_t M = comp_.size();
  std::vector<double> a0(M), a1(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double S = comp_[i].S;
    a0[i] = std::pow(S, p / 2) * mp(p);
    double s = 0;
    for (std::size_t d = 0; d < comp_[i].poly.size(); d += 2) {
      const double q = p + static_cast<double>(d);
      s += comp_[i].poly[d] * std::pow(S, q / 2) * mp(q);
    }
    a1[i] = s;
  }
  return {pairwise_sum(a0) / static_cast<double>(M),
          pairwise_sum(a1) / static_cast<double>(M) / std::sqrt(n_)};
}

double MarginalVDensity::order0_cdf(double v) const {
  std::vector<double> f(comp_.size());
  for (std::size_t i = 0; i < comp_.size(); ++i) f[i] = normal_cdf(v / std::sqrt(comp_[i].S));
  return pairwise_sum(f) / static_cast<double>(f.size());
}

std::vector<DensityRow> MarginalVDensity::table(const Eigen::VectorXd& vs) const {
  std::vector<DensityRow> rows;
  for (double v : vs) rows.push_back(evaluate(v));
  double z = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    z += 0.5 * (rows[i].x - rows[i - 1].x) * (rows[i].rectified + rows[i - 1].rectified);
  }
  if (z > 0) {
    for (auto& r : rows) r.rectified /= z;
  }
  return rows;
}

}  // namespace eulerexp
