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

// Independent numerical oracles used to validate the closed forms elsewhere
// in the library: quadrature of Gaussian divergences, exact delta(eps) from
// privacy loss distributions, the mCDP postprocessing counterexample, the
// hyperbolic and Pinsker inequality checkers, and a seeded Monte Carlo
// divergence estimator.
//
// Nothing here calls into the closed-form routines it is meant to check.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>

#include "cdp/divergence.hpp"

namespace cdp {

struct QuadratureSpec {
  double half_width_sigmas = 12.0;  // window is +-w sigma around the mode
  double abs_tol = 1e-8;
  int max_refinements = 22;         // Simpson panel doublings before giving up

  void validate() const;
};

/// log of the integral of exp(log_integrand) over
/// [center - half_width, center + half_width], by composite Simpson with
/// panel doubling until successive estimates agree to abs_tol. The integrand
/// is rescaled by its value at `center`.
double log_integral(const std::function<double(double)>& log_integrand,
                    double center, double half_width, double abs_tol,
                    int max_refinements);

/// D_alpha(N(0, sigma^2) || N(shift, sigma^2)) for alpha > 1 by quadrature
/// of the defining integral. Throws NonConvergence if abs_tol is not met.
double gaussian_renyi_quadrature(double shift, double sigma, double alpha,
                                 const QuadratureSpec& spec = {});

/// KL(N(0, sigma^2) || N(shift, sigma^2)) by quadrature of p log(p/q).
double gaussian_kl_quadrature(double shift, double sigma,
                              const QuadratureSpec& spec = {});

/// Exact delta(eps) = E[max(0, 1 - exp(eps - Z))]; +inf losses contribute
/// their full mass.
double delta_from_pld(const PrivacyLossDist& z, double eps);

/// Exact delta(eps) for a privacy loss Z ~ N(eta, 2 eta), the loss of a
/// Gaussian mechanism with Delta^2 / (2 sigma^2) = eta. With s = sqrt(2 eta):
///   delta = Phi(s/2 - eps/s) - e^eps Phi(-s/2 - eps/s).
double delta_exact_gaussian(double eta, double eps);

struct McdpCheck {
  double lhs = 0.0;  // E[exp(lambda (Z - E Z))]
  double rhs = 0.0;  // exp(2 lambda^2 / sigma^2)
  bool violated = false;
  double p = 0.0;    // Pr[output agrees with the input sign]
  double q = 0.0;    // Pr[output disagrees]
};

/// Gaussian bit mechanism N(x, sigma^2), x = +-1, postprocessed by the
/// threshold map at +-t. Reports whether its privacy loss breaks the
/// (2/sigma^2, 2/sigma)-mCDP moment bound at lambda. Requires t > 1.
McdpCheck mcdp_postprocess_violation(double sigma, double t, double lambda);

/// Same moment check for the raw (unthresholded) Gaussian bit mechanism, with
/// E[Z] and the moment computed by quadrature over the output.
McdpCheck gaussian_mcdp_check(double sigma, double lambda,
                              const QuadratureSpec& spec = {});

struct HyperbolicSides {
  double lhs = 0.0;  // (sinh x - sinh y) / sinh(x - y)
  double rhs = 0.0;  // exp(x y / 2)
};

/// Requires 0 <= y < x <= 2; DomainError otherwise.
HyperbolicSides hyperbolic_sides(double x, double y);
bool hyperbolic_inequality_check(double x, double y);

struct PinskerCheck {
  double gap = 0.0;              // |E_p f - E_q f|
  double plain_rhs = 0.0;        // sqrt(2 KL(p || q))
  double generalized_rhs = 0.0;  // sqrt(E_q f^2) sqrt(exp(D_2(p || q)) - 1)
  bool plain_ok = false;
  bool generalized_ok = false;
};

/// `f` lists the test function's value on each outcome of p, in p's order.
/// Values must lie in [-1, 1].
PinskerCheck pinsker_check(const OutcomeDist& p, const OutcomeDist& q,
                           const Eigen::VectorXd& f);

/// Inverse-CDF sampler over a finite distribution. Uniforms come from the
/// top 53 bits of std::mt19937_64, so draws are reproducible across
/// platforms for a fixed seed.
class FiniteSampler {
 public:
  explicit FiniteSampler(OutcomeDist dist);

  const OutcomeDist& distribution() const { return dist_; }

  /// Empirical counts of `n` draws with a generator seeded by `seed`.
  Eigen::VectorXd sample_counts(std::size_t n, std::uint64_t seed) const;

 private:
  OutcomeDist dist_;
  std::vector<double> cumulative_;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  /// An outcome seen under p never appeared under q; the estimate is +inf.
  bool support_violation = false;
};

/// Plug-in estimate of D_alpha(p || q) from n draws of each sampler, with a
/// delta-method standard error. The two streams are derived from `seed`.
/// Requires alpha > 1 and n_samples >= 10^4; samplers must share an outcome
/// set.
McEstimate mc_divergence_estimate(const FiniteSampler& p_sampler,
                                  const FiniteSampler& q_sampler, double alpha,
                                  std::size_t n_samples, std::uint64_t seed);

/// Monte Carlo estimate of E[max(0, 1 - exp(eps - Z))] for Z ~ N(eta, 2 eta),
/// the tail functional that delta_exact_gaussian evaluates in closed form.
McEstimate mc_gaussian_delta(double eta, double eps, std::size_t n_samples,
                             std::uint64_t seed);

}  // namespace cdp
