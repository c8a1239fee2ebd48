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

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eulerexp {

// Drift and diffusion coefficients with derivatives up to order 3 at one point.
struct Jet {
  double a = 0, a1 = 0, a2 = 0, a3 = 0;
  double b = 0, b1 = 0, b2 = 0, b3 = 0;
};

// One step of a (possibly exact) one-step map x -> Phi(x, dt, dw) with the
// partial derivatives needed by the variation processes.
struct StepJet {
  double value = 0;
  double dx = 0;   // dPhi/dx
  double dw = 0;   // dPhi/d(dw)
  double dxx = 0;  // d2Phi/dx2
  double dxw = 0;  // d2Phi/dx d(dw)
};

enum class ModelKind { GBM, OU, LinearSDE, ConstDiff };

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DiffusionModel {
  std::string name;
  std::vector<double> params;
  double x0 = 0;
  std::function<Jet(double)> jet;
  // Exact one-step solution map; absent means fine Euler is the reference.
  std::function<StepJet(double x, double dt, double dw)> exact_step;

  double a(double x) const { return jet(x).a; }
  double b(double x) const { return jet(x).b; }
  bool has_exact_solution() const { return static_cast<bool>(exact_step); }

  // Exact solution along a Brownian path given as increments over steps dt.
  // Throws if the model carries no exact solution.
  double exact_solution(const std::vector<double>& dt,
                        const std::vector<double>& dw) const;
};

// Euler one-step map with its derivatives; used when no exact map exists.
StepJet euler_step(const Jet& j, double dt, double dw);

ModelKind parse_model_kind(const std::string& s);
std::string to_string(ModelKind k);

// GBM: [mu, sigma, x0]; OU: [theta, sigma, x0];
// LinearSDE: [alpha, beta, gamma, delta, x0] with a = alpha x + beta,
// b = gamma x + delta; ConstDiff: [choice, sigma, x0] or
// [choice, sigma, x0, theta] with choice 0: a = 0, 1: a = -theta x,
// 2: a = theta sin x.
DiffusionModel builtin_model(ModelKind kind, const std::vector<double>& params);

struct DerivativeCheck {
  std::string pair;  // e.g. "b,b1"
  double max_mismatch = 0;
  double tolerance = 0;  // smallest per-point tolerance seen
  bool failed = false;
};

struct DerivativeReport {
  std::vector<DerivativeCheck> pairs;
  bool ok() const;
};

DerivativeReport check_derivatives(const DiffusionModel& model,
                                   const std::vector<double>& xs, double h);

}  // namespace eulerexp
