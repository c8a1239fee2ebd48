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
#include <array>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "eulerexp/numerics.hpp"
#include "eulerexp/symbol.hpp"

namespace eulerexp {

template <class Scalar>
Scalar hermite(int order, Scalar y) {
  if (order == 3) return y * y * y - 3 * y;
  if (order == 5) return y * y * y * y * y - 10 * y * y * y + 15 * y;
  throw std::invalid_argument("hermite: order must be 3 or 5");
}

enum class DensityKind { Pair, MarginalV, Studentized };

// One row of an exported density table.
struct DensityRow {
  double x = 0;
  double order0 = 0;
  double correction = 0;
  double total = 0;
  double rectified = 0;
  double stderr_ = 0;
};

// Writes rows with the given header (e.g. "y,phi") followed by
// correction,total,rectified,stderr; 17 significant digits.
void write_density_csv(std::ostream& os, const std::string& first_columns,
                       const std::vector<DensityRow>& rows);

// Monomial orders (m_j, n_j) of the pair-density correction, j = 1..7,
// and the symbol coefficient each one carries (index into H; the first
// entry carries H2 + H3 z, the second H1 z).
struct MonomialEntry {
  int m, n;
  int h0, h1;  // H index of the z^0 and z^1 parts, 0 for none
};
const std::array<MonomialEntry, 7>& monomial_table();

// Per-path combinations whose means are a1, a2, a3.
struct StudentizedMoments {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();  // of the per-path values
  std::size_t count = 0;
};

StudentizedMoments studentized_moments(const std::vector<SymbolCoefficients>& sample);

struct StudentizedCoefficients {
  double a1 = 0, a2 = 0, a3 = 0;
  double se1 = 0, se2 = 0, se3 = 0;
  Eigen::Matrix3d cov_mean = Eigen::Matrix3d::Zero();  // covariance of (a1, a2, a3)
};

// a1 = E[H2 C^{-1/2}] - 3E[H1 C^{-1/2}] - E[H5 C^{-3/2}]/2 + 3E[H6 C^{-5/2}],
// a2 = E[H3], a3 = E[H1 C^{-1/2}].
StudentizedCoefficients studentized_coeffs(const StudentizedMoments& moments);

double studentized_density(const StudentizedCoefficients& a, double n, double y);
double studentized_cdf(const StudentizedCoefficients& a, double n, double y);

class StudentizedDensity {
 public:
  StudentizedDensity(StudentizedCoefficients a, double n);
  DensityRow evaluate(double y) const;
  // True if the corrected density is negative somewhere on [-8, 8].
  bool has_negative_part() const { return negative_; }
  std::vector<DensityRow> table(const Eigen::VectorXd& ys) const;
  const StudentizedCoefficients& coefficients() const { return a_; }

 private:
  StudentizedCoefficients a_;
  double n_;
  double rect_norm_ = 1;
  bool negative_ = false;
};

// Ingredients of the (Z_n, C) pair density: the density of C and the
// conditional means E[H_j | C = x].
struct PairIngredients {
  std::function<double(double)> pC;
  std::function<double(int j, double x)> cond;
};

// Builds ingredients from a sample: log-scale Gaussian KDE for p^C and
// Nadaraya-Watson regressions of H_j on log C.
PairIngredients sample_ingredients(const std::vector<SymbolCoefficients>& sample,
                                   double* log_bandwidth = nullptr);

class PairDensity {
 public:
  // From a sample; detects deterministic C (sd < 1e-10). The x support is
  // the sampled range widened by 8 log-scale bandwidths.
  PairDensity(const std::vector<SymbolCoefficients>& sample, double n);
  // From analytic ingredients; fd_step is the relative x step for the
  // finite-difference x-derivatives; [lo, hi] is the x support.
  PairDensity(PairIngredients ing, double n, double fd_step, double lo, double hi);

  bool deterministic_C() const { return deterministic_; }
  double C0() const { return C0_; }

  double order0(double z, double x) const;
  // Sum of the seven correction terms, without the n^{-1/2} factor.
  double correction_raw(double z, double x) const;
  double term(int j, double z, double x) const;  // j = 1..7
  double correction(double z, double x) const { return correction_raw(z, x) / std::sqrt(n_); }
  double total(double z, double x) const { return order0(z, x) + correction(z, x); }

  // Density of Z_n alone (x integrated out); exact when C is deterministic.
  double z_density(double z) const;
  double log_bandwidth() const { return bw_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

 private:
  double base(int j, double z, double x) const;
  PairIngredients ing_;
  double n_;
  bool deterministic_ = false;
  double C0_ = 0;
  std::array<double, 9> Hbar_{};  // unconditional means, deterministic case
  double bw_ = 0;                 // log-scale bandwidth
  double fd_ = 0.05;
  double lo_ = 0, hi_ = 0;        // x support (sampled range)
};

// Per-path record for the marginal density of V_n = Sigma_T Z_n: the full
// symbol (adaptive plus anticipative with F = Sigma_T).
struct MarginalSample {
  double Sigma = 0;
  double C = 0;
  SymbolPolynomial symbol;
};

class MarginalVDensity {
 public:
  MarginalVDensity(const std::vector<MarginalSample>& sample, double n);
  DensityRow evaluate(double v) const;
  // int |v|^p density: order-0 and n^{-1/2}-correction parts.
  std::array<double, 2> abs_moment(double p) const;
  // Closed-form order-0 CDF (mixture of normals).
  double order0_cdf(double v) const;
  std::vector<DensityRow> table(const Eigen::VectorXd& vs) const;
  double scale() const { return scale_; }

 private:
  struct Component {
    double S;
    std::vector<double> poly;  // correction polynomial in v
  };
  std::vector<Component> comp_;
  double n_;
  double scale_ = 1;  // sqrt(mean S), for quadrature ranges
};

// Polynomial times centred Gaussian density with variance S:
// (-d/dv)^r [P(v) phi(v; 0, S)] = P_r(v) phi(v; 0, S).
std::vector<double> neg_derivative_poly(const std::vector<double>& P, double S, int r);
double poly_eval(const std::vector<double>& P, double v);

}  // namespace eulerexp
