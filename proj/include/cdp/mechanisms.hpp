// Copyright 2026 The CDP Accountant Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Canonical mechanisms, either as explicit pairs of output distributions on
// neighboring inputs or as closed-form divergence curves.

#pragma once

#include <utility>
#include <vector>

#include "cdp/divergence.hpp"

namespace cdp {

/// Scalar Gaussian mechanism: releases N(q(x), sigma^2) for a query of
/// sensitivity `sensitivity`.
class GaussianMech {
 public:
  GaussianMech(double sensitivity, double sigma);

  double sensitivity() const { return sensitivity_; }
  double sigma() const { return sigma_; }

 private:
  double sensitivity_;
  double sigma_;
};

/// Spherical Gaussian mechanism in `dim` dimensions. Only the l2 distance
/// between the means matters, so it reduces to the scalar mechanism.
class MultiGaussianMech {
 public:
  MultiGaussianMech(double l2_sensitivity, double sigma, int dim);

  double l2_sensitivity() const { return l2_sensitivity_; }
  double sigma() const { return sigma_; }
  int dim() const { return dim_; }

  GaussianMech scalar_reduction() const {
    return GaussianMech(l2_sensitivity_, sigma_);
  }

 private:
  double l2_sensitivity_;
  double sigma_;
  int dim_;
};

struct ExpMechSpec {
  std::vector<double> candidate_losses;  // loss of each candidate for fixed x
  double delta_sensitivity = 1.0;
  double epsilon = 1.0;
};

/// Delta^2 / (2 sigma^2).
double gaussian_rho(const GaussianMech& mech);

/// D_alpha(N(0, sigma^2) || N(shift, sigma^2)) = alpha shift^2 / (2 sigma^2).
/// Multivariate callers pass the l2 norm of the mean difference.
double gaussian_renyi(double shift, double sigma, double alpha);

/// sigma = Delta / sqrt(2 rho).
double calibrate_sigma_for_rho(double sensitivity, double rho);

/// Smallest sigma (to relative precision 1e-12) for which the Gaussian
/// mechanism's zCDP guarantee converts to (eps, delta)-DP through the refined
/// conversion. The search runs over sigma / sensitivity, so the result scales
/// exactly with the sensitivity.
double calibrate_sigma_for_dp(double sensitivity, double eps, double delta);

/// Noise level required by the closed-form (simple) conversion
/// eps = rho + 2 sqrt(rho log(1/delta)). Never smaller than the calibrated one.
double calibrate_sigma_for_dp_simple(double sensitivity, double eps,
                                     double delta);

/// Per-bit randomized response on {-1, +1}. Returns the output distributions
/// for true bit +1 (first) and -1 (second); the true value is kept with
/// probability e^eps / (1 + e^eps).
std::pair<OutcomeDist, OutcomeDist> randomized_response(double eps);

/// Labels of approx_randomized_response outputs: (bit, flag) with flag
/// "T" for the disclosing branch and "B" otherwise.
inline const std::vector<Label>& approx_rr_outcomes() {
  static const std::vector<Label> kOutcomes = {"0,T", "1,T", "0,B", "1,B"};
  return kOutcomes;
}

/// Randomized response that discloses its input with probability delta.
/// Returns the output distributions for input bits 0 (first) and 1 (second).
std::pair<OutcomeDist, OutcomeDist> approx_randomized_response(double eps,
                                                               double delta);

/// Candidate y is drawn with probability proportional to
/// exp(-loss(y) eps / (2 Delta)). Candidates with equal losses stay distinct
/// outcomes "y0", "y1", ...
OutcomeDist exponential_mechanism(const ExpMechSpec& spec);

/// Gaussian bit mechanism N(x, sigma^2), x in {-1, +1}, followed by the
/// three-way threshold at +-t. Returns distributions over {"-1","0","+1"} for
/// x = +1 (first) and x = -1 (second).
std::pair<OutcomeDist, OutcomeDist> thresholded_gaussian(double sigma,
                                                         double t);

}  // namespace cdp
