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
#include <iosfwd>
#include <string>
#include <vector>

#include "eulerexp/edgeworth.hpp"
#include "eulerexp/model.hpp"
#include "eulerexp/numerics.hpp"
#include "eulerexp/symbol.hpp"

namespace eulerexp {

// Scalar test function with optional coded derivatives.
struct TestFunction {
  std::string name;
  std::function<double(double)> f, d1, d2, d3;
};

TestFunction power_function(int k);           // x^k
TestFunction indicator_function(double c);    // 1{x <= c}, no derivatives
TestFunction parse_test_function(const std::string& spec);  // "x^2", "1{x<=0.5}"

struct Campaign {
  DiffusionModel model;
  std::vector<int> n_list;
  int m = 1;
  std::size_t M = 1000;
  double T = 1.0;
  std::uint64_t seed = 1;
  int workers = 1;
  int root = 0;                   // 0: smallest n, so the grids nest
  std::size_t predict_paths = 0;  // paths for predicted columns, 0 = M
  int predict_m = 0;              // refinement for predictions, 0 = m
  KernelWeight weight = KernelWeight::Pathwise;
};

// Column-named numeric table written as CSV with 17 significant digits.
// With labels, the first column holds one string per row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
};
void write_csv(std::ostream& os, const Table& t);

// Log-log least squares. Throws on fewer than three points or on
// nonpositive values. Weights 1/(se/y)^2; unit weights if any se <= 0.
LineFit rate_regression(const std::vector<double>& n, const std::vector<double>& y,
                        const std::vector<double>& se = {});

struct StrongRow {
  int n = 0;
  double empirical = 0, empirical_se = 0;
  double predicted = 0, predicted_se = 0;  // NaN when not requested
  double ratio = 0;
};
struct StrongResult {
  double p = 2;
  std::vector<StrongRow> rows;
  LineFit fit;
  Table table() const;
};
// E[|U_T|^p]^{1/p} per n; the prediction integrates |v|^p against the
// marginal density of V built at the largest n (degenerate models throw).
StrongResult strong_error(const Campaign& c, double p, bool predict = true);

struct WeakRow {
  int n = 0;
  double empirical = 0, empirical_se = 0;  // E f(X^n_T) - E f(X_T)
  double predicted = 0, predicted_se = 0;  // constant / n
  double var_difference = 0, var_euler = 0, var_reference = 0;
};
struct WeakResult {
  std::vector<WeakRow> rows;
  LineFit fit;  // on |empirical|; slope NaN if some value is 0
  double constant = 0, constant_se = 0;  // predicted n-coefficient
  double empirical_constant = 0, empirical_constant_se = 0;
  bool crn_ok = true;  // Var(difference) below both variances, every n
  std::string warning;
  Table table() const;
};
// Common-random-number weak error. Needs f, f', f''; the prediction
// additionally needs f'''. The empirical constant is the intercept of
// n * error regressed on 1/n.
WeakResult weak_error(const Campaign& c, const TestFunction& f, bool predict = true);

struct CltEntry {
  std::string name;
  double empirical = 0, empirical_se = 0;
  double predicted = 0;
  double z = 0;
};
struct CltResult {
  int n = 0;
  std::vector<CltEntry> entries;
  double max_abs_z() const;
  Table table() const;
};
// Raw second moments of (M^n_T, A^n(1)_T, A^n(2)_T, W_T) against the
// integrated CLT coefficients, at the largest n.
CltResult clt_validation(const Campaign& c);

struct DensityImprovementRow {
  int n = 0;
  double d0 = 0, d1 = 0, d_se = 0;
  double a1 = 0, a2 = 0, a3 = 0;
  double a1_se = 0, a2_se = 0, a3_se = 0;
};
struct DensityImprovementResult {
  std::vector<DensityImprovementRow> rows;
  LineFit fit0, fit1;
  bool ordered = true;  // d1 < d0 for every n
  Table table() const;
};
// Sup distance of the empirical CDF of V_T / (Sigma_T C_T^{1/2}) to
// Phi and to the corrected CDF, on 2001 points of [-5, 5].
DensityImprovementResult density_improvement(const Campaign& c);

struct VarianceRow {
  int n = 0;
  double variance = 0, variance_se = 0;
  double predicted = 0, predicted_se = 0;  // E[Sigma_T^2 C_T]
};
std::vector<VarianceRow> limit_variance(const Campaign& c);

struct LeadingRow {
  int n = 0;
  double median = 0, median_se = 0;  // median of sup_t |V - Vbar|
};
std::vector<LeadingRow> leading_term_sup(const Campaign& c);

struct SecondOrderRow {
  int n = 0;
  double mean = 0, mean_se = 0;          // of sqrt(n)(V_T - Vbar_T)
  double variance = 0, variance_se = 0;
  double predicted_mean = 0, predicted_mean_se = 0;  // E[Sigma mu]
  double predicted_variance = 0, predicted_variance_se = 0;
};
std::vector<SecondOrderRow> second_order(const Campaign& c);

Table to_table(const std::vector<VarianceRow>& rows);
Table to_table(const std::vector<LeadingRow>& rows);
Table to_table(const std::vector<SecondOrderRow>& rows);

}  // namespace eulerexp
