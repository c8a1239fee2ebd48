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
#include "eulerexp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eulerexp {

double DiffusionModel::exact_solution(const std::vector<double>& dt,
                                      const std::vector<double>& dw) const {
  if (!exact_step) throw ModelError(name + ": no exact solution");
  if (dt.size() != dw.size()) throw ModelError("exact_solution: size mismatch");
  double x = x0;
  for (std::size_t k = 0; k < dt.size(); ++k) x = exact_step(x, dt[k], dw[k]).value;
  return x;
}

StepJet euler_step(const Jet& j, double dt, double dw) {
  return {0.0, 1.0 + j.a1 * dt + j.b1 * dw, j.b, j.a2 * dt + j.b2 * dw, j.b1};
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "GBM") return ModelKind::GBM;
  if (s == "OU") return ModelKind::OU;
  if (s == "LinearSDE") return ModelKind::LinearSDE;
  if (s == "ConstDiff") return ModelKind::ConstDiff;
  throw ModelError("unknown model kind '" + s + "'");
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::GBM: return "GBM";
    case ModelKind::OU: return "OU";
    case ModelKind::LinearSDE: return "LinearSDE";
    case ModelKind::ConstDiff: return "ConstDiff";
  }
  return "?";
}

namespace {

void expect_count(const std::string& kind, const std::vector<double>& p,
                  std::size_t lo, std::size_t hi) {
  if (p.size() < lo || p.size() > hi) {
    throw ModelError(kind + ": expected " + std::to_string(lo) +
                     (hi > lo ? "-" + std::to_string(hi) : "") +
                     " parameters, got " + std::to_string(p.size()));
  }
  for (double v : p) {
    if (!std::isfinite(v)) throw ModelError(kind + ": non-finite parameter");
  }
}

// (1 - e^{-y}) / y, stable near 0.
double expm1_ratio(double y) {
  if (std::abs(y) < 1e-8) return 1.0 - 0.5 * y;
  return -std::expm1(-y) / y;
}

StepJet ou_step(double theta, double sigma, double x, double dt, double dw) {
  double e = std::exp(-theta * dt);
  double c = sigma * expm1_ratio(theta * dt);
  return {e * x + c * dw, e, c, 0.0, 0.0};
}

}  // namespace

DiffusionModel builtin_model(ModelKind kind, const std::vector<double>& p) {
  DiffusionModel m;
  m.name = to_string(kind);
  m.params = p;
  switch (kind) {
    case ModelKind::GBM: {
      expect_count("GBM", p, 3, 3);
      double mu = p[0], sigma = p[1];
      if (sigma <= 0) throw ModelError("GBM: sigma must be > 0");
      m.x0 = p[2];
      m.jet = [mu, sigma](double x) {
        Jet j;
        j.a = mu * x;
        j.a1 = mu;
        j.b = sigma * x;
        j.b1 = sigma;
        return j;
      };
      m.exact_step = [mu, sigma](double x, double dt, double dw) {
        double e = std::exp((mu - 0.5 * sigma * sigma) * dt + sigma * dw);
        return StepJet{x * e, e, sigma * x * e, 0.0, sigma * e};
      };
      break;
    }
    case ModelKind::OU: {
      expect_count("OU", p, 3, 3);
      double theta = p[0], sigma = p[1];
      if (sigma <= 0) throw ModelError("OU: sigma must be > 0");
      m.x0 = p[2];
      m.jet = [theta, sigma](double x) {
        Jet j;
        j.a = -theta * x;
        j.a1 = -theta;
        j.b = sigma;
        return j;
      };
      m.exact_step = [theta, sigma](double x, double dt, double dw) {
        return ou_step(theta, sigma, x, dt, dw);
      };
      break;
    }
    case ModelKind::LinearSDE: {
      expect_count("LinearSDE", p, 5, 5);
      double al = p[0], be = p[1], ga = p[2], de = p[3];
      if (ga == 0 && de == 0) {
        throw ModelError("LinearSDE: diffusion coefficient vanishes (gamma = delta = 0)");
      }
      m.x0 = p[4];
      m.jet = [al, be, ga, de](double x) {
        Jet j;
        j.a = al * x + be;
        j.a1 = al;
        j.b = ga * x + de;
        j.b1 = ga;
        return j;
      };
      break;
    }
    case ModelKind::ConstDiff: {
      expect_count("ConstDiff", p, 3, 4);
      int choice = static_cast<int>(p[0]);
      double sigma = p[1];
      double theta = p.size() > 3 ? p[3] : 1.0;
      if (choice < 0 || choice > 2 || static_cast<double>(choice) != p[0]) {
        throw ModelError("ConstDiff: drift choice must be 0, 1 or 2");
      }
      if (sigma <= 0) throw ModelError("ConstDiff: sigma must be > 0");
      m.x0 = p[2];
      if (choice == 0) {
        m.jet = [sigma](double) {
          Jet j;
          j.b = sigma;
          return j;
        };
        m.exact_step = [sigma](double x, double, double dw) {
          return StepJet{x + sigma * dw, 1.0, sigma, 0.0, 0.0};
        };
      } else if (choice == 1) {
        m.jet = [sigma, theta](double x) {
          Jet j;
          j.a = -theta * x;
          j.a1 = -theta;
          j.b = sigma;
          return j;
        };
        m.exact_step = [theta, sigma](double x, double dt, double dw) {
          return ou_step(theta, sigma, x, dt, dw);
        };
      } else {
        m.jet = [sigma, theta](double x) {
          double s = std::sin(x), c = std::cos(x);
          Jet j;
          j.a = theta * s;
          j.a1 = theta * c;
          j.a2 = -theta * s;
          j.a3 = -theta * c;
          j.b = sigma;
          return j;
        };
      }
      break;
    }
  }
  return m;
}

bool DerivativeReport::ok() const {
  return std::none_of(pairs.begin(), pairs.end(),
                      [](const DerivativeCheck& c) { return c.failed; });
}

DerivativeReport check_derivatives(const DiffusionModel& model,
                                   const std::vector<double>& xs, double h) {
  struct Pair {
    const char* label;
    double Jet::*f;
    double Jet::*df;
    double Jet::*ddf;  // next derivative, or the pair's own derivative
  };
  static const Pair pairs[] = {
      {"a,a1", &Jet::a, &Jet::a1, &Jet::a2},   {"a1,a2", &Jet::a1, &Jet::a2, &Jet::a3},
      {"a2,a3", &Jet::a2, &Jet::a3, &Jet::a3}, {"b,b1", &Jet::b, &Jet::b1, &Jet::b2},
      {"b1,b2", &Jet::b1, &Jet::b2, &Jet::b3}, {"b2,b3", &Jet::b2, &Jet::b3, &Jet::b3},
  };
  constexpr double eps = std::numeric_limits<double>::epsilon();
  DerivativeReport report;
  for (const auto& p : pairs) {
    DerivativeCheck c;
    c.pair = p.label;
    c.tolerance = std::numeric_limits<double>::infinity();
    for (double x : xs) {
      Jet jp = model.jet(x + h), jm = model.jet(x - h), j0 = model.jet(x);
      double fd = (jp.*p.f - jm.*p.f) / (2 * h);
      double mismatch = std::abs(fd - j0.*p.df);
      double tol = 10 * h * h * (1 + std::abs(j0.*p.ddf)) +
                   64 * eps * (1 + std::abs(j0.*p.f)) / h;
      c.max_mismatch = std::max(c.max_mismatch, mismatch);
      c.tolerance = std::min(c.tolerance, tol);
      if (!(mismatch <= tol)) c.failed = true;
    }
    report.pairs.push_back(c);
  }
  return report;
}

}  // namespace eulerexp
