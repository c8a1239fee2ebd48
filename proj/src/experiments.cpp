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
#include "eulerexp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <regex>
#include <stdexcept>

#include "eulerexp/errorproc.hpp"
#include "eulerexp/grid.hpp"
#include "eulerexp/limitlaw.hpp"
#include "eulerexp/malliavin.hpp"
#include "eulerexp/pathsim.hpp"

namespace eulerexp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_campaign(const Campaign& c) {
  if (c.n_list.empty()) throw std::invalid_argument("campaign: n_list is empty");
  if (c.M < 1) throw std::invalid_argument("campaign: M must be >= 1");
  if (!(c.T > 0 && c.T <= 1)) throw std::invalid_argument("campaign: T must lie in (0, 1]");
  for (int n : c.n_list) {
    if (n < 1) throw std::invalid_argument("campaign: n must be >= 1");
  }
}

int campaign_root(const Campaign& c) {
  if (c.root > 0) return c.root;
  return *std::min_element(c.n_list.begin(), c.n_list.end());
}

std::shared_ptr<const TimeGrid> grid_for(const Campaign& c, int n, int m) {
  return std::make_shared<const TimeGrid>(make_grid(n, m, {c.T}, campaign_root(c)));
}

std::size_t predict_count(const Campaign& c) {
  return c.predict_paths > 0 ? std::min(c.predict_paths, c.M) : c.M;
}

int predict_m(const Campaign& c) { return c.predict_m > 0 ? c.predict_m : c.m; }

int max_n(const Campaign& c) { return *std::max_element(c.n_list.begin(), c.n_list.end()); }

struct Terminal {
  double x_ref = 0, x_euler = 0;
};

Terminal terminal(const DiffusionModel& model, const std::shared_ptr<const TimeGrid>& g,
                  std::uint64_t seed, std::uint64_t stream, int T) {
  BrownianPath p = sample_brownian(g, seed, stream);
  bool fe = true, fr = true;
  Eigen::VectorXd xe = euler_path(model, p, &fe);
  Eigen::VectorXd xr = reference_path(model, p, nullptr, &fr);
  if (!fe || !fr) throw std::runtime_error("non-finite path (stream " + std::to_string(stream) + ")");
  return {xr[T], xe[T]};
}

CoupledPaths coupled(const DiffusionModel& model, const std::shared_ptr<const TimeGrid>& g,
                     std::uint64_t seed, std::uint64_t stream) {
  CoupledPaths cp = simulate_coupled(model, g, seed, stream);
  if (!cp.finite) throw std::runtime_error("non-finite path (stream " + std::to_string(stream) + ")");
  return cp;
}

double mean_of(const std::vector<double>& x) {
  return pairwise_sum(x) / static_cast<double>(x.size());
}

// Sample variance and the standard error of that estimate.
std::pair<double, double> variance_se(const std::vector<double>& x) {
  const double mu = mean_of(x);
  const std::size_t M = x.size();
  std::vector<double> d2(M), d4(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double d = x[i] - mu;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double m2 = mean_of(d2);
  const double m4 = mean_of(d4);
  const double var = M > 1 ? m2 * static_cast<double>(M) / static_cast<double>(M - 1) : 0.0;
  return {var, std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(M))};
}

}  // namespace

TestFunction power_function(int k) {
  if (k < 0) throw std::invalid_argument("power_function: k >= 0");
  auto pw = [](double x, int e) { return e < 0 ? 0.0 : std::pow(x, e); };
  const double kk = k;
  TestFunction t;
  t.name = "x^" + std::to_string(k);
  t.f = [=](double x) { return pw(x, k); };
  t.d1 = [=](double x) { return kk * pw(x, k - 1); };
  t.d2 = [=](double x) { return kk * (kk - 1) * pw(x, k - 2); };
  t.d3 = [=](double x) { return kk * (kk - 1) * (kk - 2) * pw(x, k - 3); };
  return t;
}

TestFunction indicator_function(double c) {
  TestFunction t;
  t.name = "1{x<=" + std::to_string(c) + "}";
  t.f = [c](double x) { return x <= c ? 1.0 : 0.0; };
  return t;
}

TestFunction parse_test_function(const std::string& spec) {
  std::smatch m;
  static const std::regex pow_re(R"(\s*x\^(\d+)\s*)");
  static const std::regex lin_re(R"(\s*x\s*)");
  static const std::regex ind_re(R"(\s*1\{x<=([-+0-9.eE]+)\}\s*)");
  if (std::regex_match(spec, m, pow_re)) return power_function(std::stoi(m[1]));
  if (std::regex_match(spec, lin_re)) return power_function(1);
  if (std::regex_match(spec, m, ind_re)) return indicator_function(std::stod(m[1]));
  throw std::invalid_argument("unknown test function '" + spec + "'");
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& r = t.rows[k];
    if (!t.labels.empty()) os << t.labels[k] << (r.empty() ? "" : ",");
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

LineFit rate_regression(const std::vector<double>& n, const std::vector<double>& y,
                        const std::vector<double>& se) {
  if (n.size() != y.size()) throw std::invalid_argument("rate_regression: size mismatch");
  if (n.size() < 3) throw std::invalid_argument("rate_regression: need at least 3 points");
  bool unit = se.size() != y.size();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(n[i] > 0) || !(y[i] > 0)) {
      throw std::invalid_argument("rate_regression: nonpositive value");
    }
    if (!unit && !(se[i] > 0)) unit = true;
  }
  std::vector<double> lx(n.size()), ly(n.size()), w(n.size(), 1.0);
  for (std::size_t i = 0; i < n.size(); ++i) {
    lx[i] = std::log(n[i]);
    ly[i] = std::log(y[i]);
    if (!unit) w[i] = 1.0 / std::pow(se[i] / y[i], 2);
  }
  return weighted_line_fit(lx, ly, w);
}

// ---------------------------------------------------------------- strong

Table StrongResult::table() const {
  Table t{{"n", "empirical", "empirical_se", "predicted", "predicted_se", "ratio"}, {}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({double(r.n), r.empirical, r.empirical_se, r.predicted, r.predicted_se,
                      r.ratio});
  }
  return t;
}

namespace {

// Per-path record for predictions: the full marginal symbol with
// F = Sigma_T, plus the weak-error ingredients.
struct PathPrediction {
  LimitLawProfile profile;
  MalliavinBand band;
};

PathPrediction predict_path(const CoupledPaths& cp, int T) {
  PathPrediction pp;
  pp.profile = limit_law_profile(cp, T);
  VariationState vs = first_variation(cp);
  pp.band = malliavin_band(cp, vs, T);
  return pp;
}

MarginalSample marginal_sample(const CoupledPaths& cp, const PathPrediction& pp,
                               KernelWeight weight) {
  MarginalSample s;
  s.Sigma = pp.profile.Sigma_T;
  s.C = pp.profile.C_T;
  s.symbol = anticipative_symbol(cp, pp.profile.K, pp.band,
                                 {{pp.band.DSigma_T, pp.band.DDSigma_T}}, weight);
  add_adaptive_part(s.symbol, pp.profile);
  return s;
}

}  // namespace

StrongResult strong_error(const Campaign& c, double p, bool predict) {
  check_campaign(c);
  if (!(p >= 1)) throw std::invalid_argument("strong_error: p must be >= 1");
  StrongResult res;
  res.p = p;

  // Order-0 and n-free correction parts of int |v|^p p^V, per path.
  double order0 = kNaN, corr1 = kNaN, pred_se = kNaN;
  if (predict) {
    auto g = grid_for(c, max_n(c), predict_m(c));
    const int T = g->T_index[0];
    const std::size_t P = predict_count(c);
    std::vector<double> a0(P), a1(P);
    parallel_for(P, c.workers, [&](std::size_t i) {
      CoupledPaths cp = coupled(c.model, g, c.seed, i);
      PathPrediction pp = predict_path(cp, T);
      auto a = MarginalVDensity({marginal_sample(cp, pp, c.weight)}, 1.0).abs_moment(p);
      a0[i] = a[0];
      a1[i] = a[1];
    });
    order0 = mean_of(a0);
    corr1 = mean_of(a1);
    pred_se = mean_se(a0).se;
  }

  std::vector<double> ns, ys, ses;
  for (int n : c.n_list) {
    auto g = grid_for(c, n, c.m);
    const int T = g->T_index[0];
    std::vector<double> u(c.M);
    parallel_for(c.M, c.workers, [&](std::size_t i) {
      Terminal t = terminal(c.model, g, c.seed, i, T);
      u[i] = std::pow(std::abs(t.x_euler - t.x_ref), p);
    });
    MeanSE ms = mean_se(u);
    StrongRow r;
    r.n = n;
    r.empirical = std::pow(ms.mean, 1.0 / p);
    r.empirical_se = ms.mean > 0 ? r.empirical * ms.se / (p * ms.mean) : 0.0;
    if (predict) {
      const double mom = order0 + corr1 / std::sqrt(double(n));
      r.predicted = std::pow(std::max(mom, 0.0), 1.0 / p) / std::sqrt(double(n));
      r.predicted_se = mom > 0 ? r.predicted * pred_se / (p * mom) : kNaN;
      r.ratio = r.empirical / r.predicted;
    } else {
      r.predicted = r.predicted_se = r.ratio = kNaN;
    }
    res.rows.push_back(r);
    ns.push_back(n);
    ys.push_back(r.empirical);
    ses.push_back(r.empirical_se);
  }
  res.fit.slope = res.fit.intercept = kNaN;
  if (ns.size() >= 3) {
    try {
      res.fit = rate_regression(ns, ys, ses);
    } catch (const std::invalid_argument&) {
    }
  }
  return res;
}

// ------------------------------------------------------------------ weak

Table WeakResult::table() const {
  Table t{{"n", "empirical", "empirical_se", "predicted", "predicted_se", "var_difference",
           "var_euler", "var_reference"},
          {}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({double(r.n), r.empirical, r.empirical_se, r.predicted, r.predicted_se,
                      r.var_difference, r.var_euler, r.var_reference});
  }
  return t;
}

WeakResult weak_error(const Campaign& c, const TestFunction& f, bool predict) {
  check_campaign(c);
  if (!f.f || !f.d1 || !f.d2) {
    throw std::invalid_argument("weak_error: test function '" + f.name +
                                "' lacks a coded second derivative");
  }
  if (predict && !f.d3) {
    throw std::invalid_argument("weak_error: prediction needs a coded third derivative");
  }
  WeakResult res;
  if (!c.model.has_exact_solution()) {
    res.warning = c.m >= 256 ? "reference is fine Euler; weak bias O(1/(n m))"
                             : "reference is fine Euler with m < 256; weak bias not negligible";
  }

  res.constant = res.constant_se = kNaN;
  if (predict) {
    auto g = grid_for(c, max_n(c), predict_m(c));
    const int T = g->T_index[0];
    const std::size_t P = predict_count(c);
    std::vector<double> q(P);
    parallel_for(P, c.workers, [&](std::size_t i) {
      CoupledPaths cp = coupled(c.model, g, c.seed, i);
      PathPrediction pp = predict_path(cp, T);
      const auto& pr = pp.profile;
      const auto& b = pp.band;
      double AS = 0, AX = 0, BSX = 0, BXX = 0;
      for (int j = 0; j < T; ++j) {
        const double kw =
            0.5 * (c.weight == KernelWeight::Pathwise ? pr.K[j] : pr.K[T]) * g->dt(j);
        AS += kw * b.DDSigma_T[j];
        AX += kw * b.DDX_T[j];
        BSX += kw * b.DSigma_T[j] * b.DX_T[j];
        BXX += kw * b.DX_T[j] * b.DX_T[j];
      }
      const double X = pr.X_T, S = pr.Sigma_T;
      const double f1 = f.d1(X), f2 = f.d2(X), f3 = f.d3(X);
      q[i] = f1 * S * pr.mu_T + f1 * AS + f2 * S * AX + 2 * f2 * BSX + f3 * S * BXX +
             0.5 * f2 * S * S * pr.C_T;
    });
    MeanSE ms = mean_se(q);
    res.constant = ms.mean;
    res.constant_se = ms.se;
  }

  std::vector<double> ns, ys, ses, inv, scaled, w;
  bool positive = true;
  for (int n : c.n_list) {
    auto g = grid_for(c, n, c.m);
    const int T = g->T_index[0];
    std::vector<double> d(c.M), fe(c.M), fr(c.M);
    parallel_for(c.M, c.workers, [&](std::size_t i) {
      Terminal t = terminal(c.model, g, c.seed, i, T);
      fe[i] = f.f(t.x_euler);
      fr[i] = f.f(t.x_ref);
      d[i] = fe[i] - fr[i];
    });
    MeanSE md = mean_se(d);
    WeakRow r;
    r.n = n;
    r.empirical = md.mean;
    r.empirical_se = md.se;
    r.predicted = res.constant / n;
    r.predicted_se = res.constant_se / n;
    r.var_difference = md.sd * md.sd;
    r.var_euler = std::pow(mean_se(fe).sd, 2);
    r.var_reference = std::pow(mean_se(fr).sd, 2);
    if (!(r.var_difference < r.var_euler && r.var_difference < r.var_reference)) {
      res.crn_ok = false;
    }
    res.rows.push_back(r);
    ns.push_back(n);
    ys.push_back(std::abs(r.empirical));
    ses.push_back(r.empirical_se);
    if (!(std::abs(r.empirical) > 0)) positive = false;
    inv.push_back(1.0 / n);
    scaled.push_back(n * r.empirical);
    w.push_back(r.empirical_se > 0 ? 1.0 / std::pow(n * r.empirical_se, 2) : 1.0);
  }
  res.fit.slope = res.fit.intercept = kNaN;
  if (positive && ns.size() >= 3) res.fit = rate_regression(ns, ys, ses);
  res.empirical_constant = res.empirical_constant_se = kNaN;
  if (ns.size() >= 3) {
    LineFit lf = weighted_line_fit(inv, scaled, w);
    res.empirical_constant = lf.intercept;
    res.empirical_constant_se = lf.intercept_se;
  } else {
    res.empirical_constant = scaled.back();
    res.empirical_constant_se = ns.back() * res.rows.back().empirical_se;
  }
  return res;
}

// ------------------------------------------------------------------- CLT

double CltResult::max_abs_z() const {
  double z = 0;
  for (const auto& e : entries) z = std::max(z, std::abs(e.z));
  return z;
}

Table CltResult::table() const {
  Table t{{"entry", "empirical", "empirical_se", "predicted", "z"}, {}, {}};
  for (const auto& e : entries) {
    t.labels.push_back(e.name);
    t.rows.push_back({e.empirical, e.empirical_se, e.predicted, e.z});
  }
  return t;
}

CltResult clt_validation(const Campaign& c) {
  check_campaign(c);
  CltResult res;
  res.n = max_n(c);
  auto g = grid_for(c, res.n, c.m);
  const int T = g->T_index[0];
  const Eigen::VectorXd tw = trapezoid_weights(*g, T);
  struct Spec {
    const char* name;
    int a, b;  // 0 = M, 1 = A1, 2 = A2, 3 = W
    int u;     // 0 none, 1 u11, 2 u13, 3 u22, 4 u33, 5 v2
  };
  static const Spec specs[] = {{"M.M", 0, 0, 1},   {"M.A1", 0, 1, 0},  {"M.A2", 0, 2, 2},
                               {"A1.A1", 1, 1, 3}, {"A1.A2", 1, 2, 0}, {"A2.A2", 2, 2, 4},
                               {"M.W", 0, 3, 0},   {"A1.W", 1, 3, 5},  {"A2.W", 2, 3, 0}};
  constexpr int K = 9;
  std::vector<std::array<double, K>> emp(c.M), pred(c.M);
  parallel_for(c.M, c.workers, [&](std::size_t i) {
    CoupledPaths cp = coupled(c.model, g, c.seed, i);
    Eigen::VectorXd M;
    leading_term(cp, &M);
    CltProcesses cl = clt_processes(cp);
    CltCoefficientPaths u = clt_coefficients(cp);
    const double x[4] = {M[T], cl.A1[T], cl.A2[T], cp.path.W[T]};
    const double ui[6] = {0,
                          tw.dot(u.u11.head(T + 1)),
                          tw.dot(u.u13.head(T + 1)),
                          tw.dot(u.u22.head(T + 1)),
                          tw.dot(u.u33.head(T + 1)),
                          tw.dot(u.v2.head(T + 1))};
    for (int k = 0; k < K; ++k) {
      emp[i][k] = x[specs[k].a] * x[specs[k].b];
      pred[i][k] = ui[specs[k].u];
    }
  });
  for (int k = 0; k < K; ++k) {
    std::vector<double> e(c.M), p(c.M), d(c.M);
    for (std::size_t i = 0; i < c.M; ++i) {
      e[i] = emp[i][k];
      p[i] = pred[i][k];
      d[i] = e[i] - p[i];
    }
    MeanSE me = mean_se(e), md = mean_se(d);
    CltEntry en;
    en.name = specs[k].name;
    en.empirical = me.mean;
    en.empirical_se = md.se;
    en.predicted = mean_of(p);
    en.z = md.se > 0 ? md.mean / md.se : (md.mean == 0 ? 0.0 : kNaN);
    res.entries.push_back(en);
  }
  return res;
}

// ------------------------------------------------- density improvement

Table DensityImprovementResult::table() const {
  Table t{{"n", "d0", "d1", "d_se", "a1", "a1_se", "a2", "a2_se", "a3", "a3_se"}, {}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({double(r.n), r.d0, r.d1, r.d_se, r.a1, r.a1_se, r.a2, r.a2_se, r.a3,
                      r.a3_se});
  }
  return t;
}

DensityImprovementResult density_improvement(const Campaign& c) {
  check_campaign(c);
  DensityImprovementResult res;
  const int G = 2001;
  std::vector<double> ns, d0s, d1s;
  for (int n : c.n_list) {
    auto g = grid_for(c, n, c.m);
    const int T = g->T_index[0];
    const std::size_t P = predict_count(c);
    std::vector<double> z(c.M);
    std::vector<SymbolCoefficients> h(P);
    parallel_for(c.M, c.workers, [&](std::size_t i) {
      CoupledPaths cp = coupled(c.model, g, c.seed, i);
      const double C = kernel_and_C(cp, T).second;
      if (!(C > 0)) throw DegenerateModelError("density_improvement: C_T vanishes");
      z[i] = cp.sqrt_n() * (cp.X_euler[T] - cp.X_ref[T]) / (cp.Sigma[T] * std::sqrt(C));
      if (i < P) {
        PathPrediction pp = predict_path(cp, T);
        h[i] = h_coefficients(cp, pp.profile, pp.band, c.weight);
      }
    });
    StudentizedCoefficients a = studentized_coeffs(studentized_moments(h));
    std::sort(z.begin(), z.end());
    DensityImprovementRow r;
    r.n = n;
    double arg = 0;
    for (int k = 0; k < G; ++k) {
      const double y = -5.0 + 10.0 * k / (G - 1);
      const double F = double(std::upper_bound(z.begin(), z.end(), y) - z.begin()) / c.M;
      const double e0 = std::abs(F - normal_cdf(y));
      const double e1 = std::abs(F - studentized_cdf(a, n, y));
      if (e0 > r.d0) {
        r.d0 = e0;
        arg = F;
      }
      r.d1 = std::max(r.d1, e1);
    }
    r.d_se = std::sqrt(arg * (1 - arg) / c.M);
    r.a1 = a.a1;
    r.a2 = a.a2;
    r.a3 = a.a3;
    r.a1_se = a.se1;
    r.a2_se = a.se2;
    r.a3_se = a.se3;
    if (!(r.d1 < r.d0)) res.ordered = false;
    res.rows.push_back(r);
    ns.push_back(n);
    d0s.push_back(r.d0);
    d1s.push_back(r.d1);
  }
  res.fit0.slope = res.fit1.slope = kNaN;
  if (ns.size() >= 3) {
    res.fit0 = rate_regression(ns, d0s);
    res.fit1 = rate_regression(ns, d1s);
  }
  return res;
}

// ------------------------------------------------- limit-law checks

std::vector<VarianceRow> limit_variance(const Campaign& c) {
  check_campaign(c);
  std::vector<VarianceRow> rows;
  for (int n : c.n_list) {
    auto g = grid_for(c, n, c.m);
    const int T = g->T_index[0];
    std::vector<double> v(c.M);
    parallel_for(c.M, c.workers, [&](std::size_t i) {
      Terminal t = terminal(c.model, g, c.seed, i, T);
      v[i] = std::sqrt(double(n)) * (t.x_euler - t.x_ref);
    });
    auto gp = grid_for(c, n, predict_m(c));
    const int Tp = gp->T_index[0];
    const std::size_t P = predict_count(c);
    std::vector<double> s(P);
    parallel_for(P, c.workers, [&](std::size_t i) {
      CoupledPaths cp = coupled(c.model, gp, c.seed, i);
      const double C = kernel_and_C(cp, Tp).second;
      s[i] = cp.Sigma[Tp] * cp.Sigma[Tp] * C;
    });
    VarianceRow r;
    r.n = n;
    std::tie(r.variance, r.variance_se) = variance_se(v);
    MeanSE ms = mean_se(s);
    r.predicted = ms.mean;
    r.predicted_se = ms.se;
    rows.push_back(r);
  }
  return rows;
}

std::vector<LeadingRow> leading_term_sup(const Campaign& c) {
  check_campaign(c);
  std::vector<LeadingRow> rows;
  for (int n : c.n_list) {
    auto g = grid_for(c, n, c.m);
    std::vector<double> s(c.M);
    parallel_for(c.M, c.workers, [&](std::size_t i) {
      CoupledPaths cp = coupled(c.model, g, c.seed, i);
      const Eigen::VectorXd V = error_process(cp).second;
      s[i] = (V - leading_term(cp)).cwiseAbs().maxCoeff();
    });
    std::sort(s.begin(), s.end());
    const std::size_t M = s.size();
    LeadingRow r;
    r.n = n;
    r.median = M % 2 ? s[M / 2] : 0.5 * (s[M / 2 - 1] + s[M / 2]);
    // Order-statistic interval of one binomial sd around the median.
    const std::size_t h = static_cast<std::size_t>(std::ceil(0.5 * std::sqrt(double(M))));
    const std::size_t lo = M / 2 > h ? M / 2 - h : 0;
    const std::size_t hi = std::min(M - 1, M / 2 + h);
    r.median_se = 0.5 * (s[hi] - s[lo]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<SecondOrderRow> second_order(const Campaign& c) {
  check_campaign(c);
  std::vector<SecondOrderRow> rows;
  for (int n : c.n_list) {
    auto g = grid_for(c, n, c.m);
    const int T = g->T_index[0];
    std::vector<double> x(c.M), pm(c.M), ps(c.M);
    parallel_for(c.M, c.workers, [&](std::size_t i) {
      CoupledPaths cp = coupled(c.model, g, c.seed, i);
      const Eigen::VectorXd V = error_process(cp).second;
      const Eigen::VectorXd Vbar = leading_term(cp);
      x[i] = cp.sqrt_n() * (V[T] - Vbar[T]);
      LimitLawProfile pr = limit_law_profile(cp, T);
      pm[i] = pr.Sigma_T * pr.mu_T;
      ps[i] = pr.Sigma_T * pr.Sigma_T * (pr.theta.t22() + pr.mu_T * pr.mu_T);
    });
    SecondOrderRow r;
    r.n = n;
    MeanSE mx = mean_se(x), mm = mean_se(pm), mq = mean_se(ps);
    r.mean = mx.mean;
    r.mean_se = mx.se;
    std::tie(r.variance, r.variance_se) = variance_se(x);
    r.predicted_mean = mm.mean;
    r.predicted_mean_se = mm.se;
    r.predicted_variance = mq.mean - mm.mean * mm.mean;
    r.predicted_variance_se = std::hypot(mq.se, 2 * mm.mean * mm.se);
    rows.push_back(r);
  }
  return rows;
}

Table to_table(const std::vector<VarianceRow>& rows) {
  Table t{{"n", "variance", "variance_se", "predicted", "predicted_se"}, {}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({double(r.n), r.variance, r.variance_se, r.predicted, r.predicted_se});
  }
  return t;
}

Table to_table(const std::vector<LeadingRow>& rows) {
  Table t{{"n", "median_sup", "median_sup_se"}, {}, {}};
  for (const auto& r : rows) t.rows.push_back({double(r.n), r.median, r.median_se});
  return t;
}

Table to_table(const std::vector<SecondOrderRow>& rows) {
  Table t{{"n", "mean", "mean_se", "variance", "variance_se", "predicted_mean",
           "predicted_mean_se", "predicted_variance", "predicted_variance_se"},
          {}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({double(r.n), r.mean, r.mean_se, r.variance, r.variance_se,
                      r.predicted_mean, r.predicted_mean_se, r.predicted_variance,
                      r.predicted_variance_se});
  }
  return t;
}

}  // namespace eulerexp
