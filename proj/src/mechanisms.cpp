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

#include "cdp/mechanisms.hpp"

#include <cmath>
#include <string>

#include "cdp/accountant.hpp"
#include "cdp/normal.hpp"

namespace cdp {
namespace {

// Relative width at which the sigma bisection stops.
constexpr double kSigmaRelativeAccuracy = 1e-12;

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

// Refined delta reached by the Gaussian mechanism with sigma / sensitivity
// equal to `ratio`. Below eps = rho the refined bound is not stated; the
// guarantee there is taken as trivial.
double refined_delta_for_ratio(double ratio, double eps) {
  const double rho = 1.0 / (2.0 * ratio * ratio);
  if (eps < rho) return 1.0;
  return zcdp_to_dp_refined(ZcdpParams(0.0, rho), eps);
}

}  // namespace

GaussianMech::GaussianMech(double sensitivity, double sigma)
    : sensitivity_(sensitivity), sigma_(sigma) {
  if (!(sensitivity >= 0.0) || std::isinf(sensitivity)) {
    throw DomainError("GaussianMech: sensitivity must be finite and >= 0");
  }
  if (!positive_finite(sigma)) {
    throw DomainError("GaussianMech: sigma must be positive");
  }
}

MultiGaussianMech::MultiGaussianMech(double l2_sensitivity, double sigma,
                                     int dim)
    : l2_sensitivity_(l2_sensitivity), sigma_(sigma), dim_(dim) {
  if (!(l2_sensitivity >= 0.0) || std::isinf(l2_sensitivity)) {
    throw DomainError("MultiGaussianMech: l2 sensitivity must be >= 0");
  }
  if (!positive_finite(sigma)) {
    throw DomainError("MultiGaussianMech: sigma must be positive");
  }
  if (dim < 1) throw DomainError("MultiGaussianMech: dim must be >= 1");
}

double gaussian_rho(const GaussianMech& mech) {
  const double ratio = mech.sensitivity() / mech.sigma();
  return 0.5 * ratio * ratio;
}

double gaussian_renyi(double shift, double sigma, double alpha) {
  if (!positive_finite(sigma)) {
    throw DomainError("gaussian_renyi: sigma must be positive");
  }
  if (!(alpha >= 1.0)) throw InvalidOrder("gaussian_renyi: alpha must be >= 1");
  return alpha * shift * shift / (2.0 * sigma * sigma);
}

double calibrate_sigma_for_rho(double sensitivity, double rho) {
  if (!positive_finite(sensitivity) || !positive_finite(rho)) {
    throw DomainError("calibrate_sigma_for_rho: inputs must be positive");
  }
  return sensitivity / std::sqrt(2.0 * rho);
}

double calibrate_sigma_for_dp_simple(double sensitivity, double eps,
                                     double delta) {
  if (!positive_finite(sensitivity) || !positive_finite(eps)) {
    throw DomainError("calibrate_sigma_for_dp: inputs must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("calibrate_sigma_for_dp: delta must lie in (0, 1)");
  }
  // Solve rho + 2 sqrt(rho L) = eps for sqrt(rho), L = log(1/delta).
  const double log_inv = std::log(1.0 / delta);
  const double root = std::sqrt(log_inv + eps) - std::sqrt(log_inv);
  return sensitivity / (std::sqrt(2.0) * root);
}

double calibrate_sigma_for_dp(double sensitivity, double eps, double delta) {
  if (!positive_finite(sensitivity)) {
    throw DomainError("calibrate_sigma_for_dp: inputs must be positive");
  }
  // The simple conversion's ratio is known to satisfy the target.
  double hi = calibrate_sigma_for_dp_simple(1.0, eps, delta);
  if (refined_delta_for_ratio(hi, eps) > delta) {
    throw NonConvergence("calibrate_sigma_for_dp: could not bracket sigma");
  }
  double lo = 0.5 * hi;
  while (refined_delta_for_ratio(lo, eps) <= delta) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) {
      throw NonConvergence("calibrate_sigma_for_dp: degenerate float range");
    }
  }
  while (hi - lo > kSigmaRelativeAccuracy * hi) {
    const double mid = 0.5 * (lo + hi);
    if (refined_delta_for_ratio(mid, eps) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return sensitivity * hi;
}

std::pair<OutcomeDist, OutcomeDist> randomized_response(double eps) {
  if (!positive_finite(eps)) {
    throw DomainError("randomized_response: eps must be positive");
  }
  const double keep = 1.0 / (1.0 + std::exp(-eps));
  const double flip = 1.0 / (1.0 + std::exp(eps));
  const std::vector<Label> outcomes = {"-1", "+1"};
  return {OutcomeDist(outcomes, Eigen::Vector2d(flip, keep)),
          OutcomeDist(outcomes, Eigen::Vector2d(keep, flip))};
}

std::pair<OutcomeDist, OutcomeDist> approx_randomized_response(double eps,
                                                               double delta) {
  if (!(eps >= 0.0) || std::isinf(eps)) {
    throw DomainError("approx_randomized_response: eps must be >= 0");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("approx_randomized_response: delta must lie in [0, 1]");
  }
  const double keep = (1.0 - delta) / (1.0 + std::exp(-eps));
  const double flip = (1.0 - delta) / (1.0 + std::exp(eps));
  // Order: (0,T), (1,T), (0,B), (1,B).
  return {OutcomeDist(approx_rr_outcomes(), Eigen::Vector4d(delta, 0.0, keep, flip)),
          OutcomeDist(approx_rr_outcomes(), Eigen::Vector4d(0.0, delta, flip, keep))};
}

OutcomeDist exponential_mechanism(const ExpMechSpec& spec) {
  if (spec.candidate_losses.empty()) {
    throw DomainError("exponential_mechanism: empty candidate set");
  }
  if (!positive_finite(spec.delta_sensitivity) || !positive_finite(spec.epsilon)) {
    throw DomainError("exponential_mechanism: Delta and eps must be positive");
  }
  const auto n = static_cast<Eigen::Index>(spec.candidate_losses.size());
  const double scale = spec.epsilon / (2.0 * spec.delta_sensitivity);
  Eigen::VectorXd log_weights(n);
  std::vector<Label> labels;
  labels.reserve(spec.candidate_losses.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double loss = spec.candidate_losses[static_cast<std::size_t>(i)];
    if (!std::isfinite(loss)) {
      throw DomainError("exponential_mechanism: losses must be finite");
    }
    log_weights(i) = -loss * scale;
    labels.push_back("y" + std::to_string(i));
  }
  const double log_norm = kernels::log_sum_exp(log_weights);
  return OutcomeDist(std::move(labels), (log_weights.array() - log_norm).exp());
}

std::pair<OutcomeDist, OutcomeDist> thresholded_gaussian(double sigma,
                                                         double t) {
  if (!positive_finite(sigma)) {
    throw DomainError("thresholded_gaussian: sigma must be positive");
  }
  if (!(t > 1.0) || std::isinf(t)) {
    throw DomainError("thresholded_gaussian: threshold must exceed 1");
  }
  const double p = gaussian_sf(t - 1.0, sigma);  // lands on the true side
  const double q = gaussian_sf(t + 1.0, sigma);  // lands on the wrong side
  const double middle = 1.0 - p - q;
  const std::vector<Label> outcomes = {"-1", "0", "+1"};
  return {OutcomeDist(outcomes, Eigen::Vector3d(q, middle, p)),
          OutcomeDist(outcomes, Eigen::Vector3d(p, middle, q))};
}

}  // namespace cdp
