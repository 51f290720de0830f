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

#include "cdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdp/normal.hpp"
#include "cdp/rng.hpp"

namespace cdp {
namespace {

constexpr int kInitialPanels = 64;

// Locates the maximum of a unimodal function by golden-section search.
double argmax_unimodal(const std::function<double(double)>& f, double lo,
                       double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && b - a > 1e-12 * (1.0 + std::abs(a)); ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double simpson(const std::function<double(double)>& g, double lo, double hi,
               int panels) {
  const double h = (hi - lo) / panels;
  double sum = g(lo) + g(hi);
  for (int i = 1; i < panels; ++i) {
    sum += g(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Privacy-loss moment check shared by the thresholded and raw mechanisms.
McdpCheck finish_moment_check(double log_lhs, double sigma, double lambda,
                              double tolerance) {
  McdpCheck out;
  const double log_rhs = 2.0 * lambda * lambda / (sigma * sigma);
  out.lhs = std::exp(log_lhs);
  out.rhs = std::exp(log_rhs);
  out.violated = log_lhs > log_rhs + tolerance * std::max(1.0, std::abs(log_rhs));
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(half_width_sigmas >= 8.0)) {
    throw DomainError("QuadratureSpec: half_width_sigmas must be >= 8");
  }
  if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
  if (max_refinements < 1) {
    throw DomainError("QuadratureSpec: max_refinements must be >= 1");
  }
}

double log_integral(const std::function<double(double)>& log_integrand,
                    double center, double half_width, double abs_tol,
                    int max_refinements) {
  const double peak = log_integrand(center);
  const auto scaled = [&](double x) { return std::exp(log_integrand(x) - peak); };
  const double lo = center - half_width;
  const double hi = center + half_width;
  int panels = kInitialPanels;
  double previous = std::log(simpson(scaled, lo, hi, panels));
  for (int r = 0; r < max_refinements; ++r) {
    panels *= 2;
    const double current = std::log(simpson(scaled, lo, hi, panels));
    if (std::abs(current - previous) < abs_tol) return peak + current;
    previous = current;
  }
  throw NonConvergence("log_integral: tolerance not met after " +
                       std::to_string(max_refinements) + " refinements");
}

double gaussian_renyi_quadrature(double shift, double sigma, double alpha,
                                 const QuadratureSpec& spec) {
  spec.validate();
  if (!(sigma > 0.0)) throw DomainError("gaussian_renyi_quadrature: sigma > 0");
  if (!(alpha > 1.0) || std::isinf(alpha)) {
    throw InvalidOrder("gaussian_renyi_quadrature: alpha must be finite and > 1");
  }
  const double var2 = 2.0 * sigma * sigma;
  const double log_norm = -0.5 * std::log(std::numbers::pi * var2);
  // log of p(x)^alpha q(x)^(1-alpha), p = N(0, s^2), q = N(shift, s^2).
  const auto log_integrand = [=](double x) {
    return log_norm - alpha * x * x / var2 -
           (1.0 - alpha) * (x - shift) * (x - shift) / var2;
  };
  const double reach = (std::abs(shift) * alpha + sigma) * 4.0 + 1.0;
  const double mode = argmax_unimodal(log_integrand, -reach, reach);
  // Tolerance on the divergence translates to (alpha-1) x tol on the log.
  const double log_i =
      log_integral(log_integrand, mode, spec.half_width_sigmas * sigma,
                   spec.abs_tol * (alpha - 1.0), spec.max_refinements);
  return std::max(log_i / (alpha - 1.0), 0.0);
}

double gaussian_kl_quadrature(double shift, double sigma,
                              const QuadratureSpec& spec) {
  spec.validate();
  if (!(sigma > 0.0)) throw DomainError("gaussian_kl_quadrature: sigma > 0");
  const double var2 = 2.0 * sigma * sigma;
  const double norm = 1.0 / std::sqrt(std::numbers::pi * var2);
  const auto integrand = [=](double x) {
    const double log_ratio = (-(x * x) + (x - shift) * (x - shift)) / var2;
    return norm * std::exp(-x * x / var2) * log_ratio;
  };
  const double w = spec.half_width_sigmas * sigma;
  int panels = kInitialPanels;
  double previous = simpson(integrand, -w, w, panels);
  for (int r = 0; r < spec.max_refinements; ++r) {
    panels *= 2;
    const double current = simpson(integrand, -w, w, panels);
    if (std::abs(current - previous) < spec.abs_tol) return std::max(current, 0.0);
    previous = current;
  }
  throw NonConvergence("gaussian_kl_quadrature: tolerance not met");
}

double delta_from_pld(const PrivacyLossDist& z, double eps) {
  double delta = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double loss = z.losses()[i];
    if (std::isinf(loss)) {
      delta += z.probs()[i];
    } else if (loss > eps) {
      delta += z.probs()[i] * -std::expm1(eps - loss);
    }
  }
  return std::clamp(delta, 0.0, 1.0);
}

double delta_exact_gaussian(double eta, double eps) {
  if (!(eta > 0.0) || std::isinf(eta)) {
    throw DomainError("delta_exact_gaussian: eta must be positive");
  }
  if (std::isinf(eps) && eps > 0.0) return 0.0;
  const double s = std::sqrt(2.0 * eta);
  const double first = normal_sf(eps / s - s / 2.0);
  const double second_tail = normal_sf(eps / s + s / 2.0);
  const double second =
      second_tail > 0.0 ? std::exp(eps + std::log(second_tail)) : 0.0;
  return std::clamp(first - second, 0.0, 1.0);
}

McdpCheck mcdp_postprocess_violation(double sigma, double t, double lambda) {
  if (!(sigma > 0.0)) throw DomainError("mcdp_postprocess_violation: sigma > 0");
  if (!(t > 1.0)) throw DomainError("mcdp_postprocess_violation: t must exceed 1");
  const double p = gaussian_sf(t - 1.0, sigma);
  const double q = gaussian_sf(t + 1.0, sigma);
  const double middle = 1.0 - p - q;
  const double log_ratio = std::log(p) - std::log(q);
  const double mean = (p - q) * log_ratio;

  // Three-point loss: +log(p/q) w.p. p, -log(p/q) w.p. q, 0 otherwise.
  Eigen::Vector3d terms(std::log(p) + lambda * (log_ratio - mean),
                        std::log(q) + lambda * (-log_ratio - mean),
                        std::log(middle) - lambda * mean);
  McdpCheck out =
      finish_moment_check(kernels::log_sum_exp(terms), sigma, lambda, 1e-12);
  out.p = p;
  out.q = q;
  return out;
}

McdpCheck gaussian_mcdp_check(double sigma, double lambda,
                              const QuadratureSpec& spec) {
  spec.validate();
  if (!(sigma > 0.0)) throw DomainError("gaussian_mcdp_check: sigma > 0");
  const double var2 = 2.0 * sigma * sigma;
  const double log_norm = -0.5 * std::log(std::numbers::pi * var2);
  // Output y ~ N(1, sigma^2); loss f(y) = log(N(y;1,s^2) / N(y;-1,s^2)).
  const auto loss = [=](double y) {
    return ((y + 1.0) * (y + 1.0) - (y - 1.0) * (y - 1.0)) / var2;
  };
  const auto log_density = [=](double y) {
    return log_norm - (y - 1.0) * (y - 1.0) / var2;
  };
  const double w = spec.half_width_sigmas * sigma;

  int panels = kInitialPanels;
  const auto weighted_loss = [&](double y) {
    return std::exp(log_density(y)) * loss(y);
  };
  double mean = simpson(weighted_loss, 1.0 - w, 1.0 + w, panels);
  for (int r = 0;; ++r) {
    if (r == spec.max_refinements) {
      throw NonConvergence("gaussian_mcdp_check: mean did not converge");
    }
    panels *= 2;
    const double next = simpson(weighted_loss, 1.0 - w, 1.0 + w, panels);
    const bool done = std::abs(next - mean) < spec.abs_tol;
    mean = next;
    if (done) break;
  }

  const auto log_moment = [&](double y) {
    return log_density(y) + lambda * (loss(y) - mean);
  };
  const double reach = 4.0 * (std::abs(lambda) * 4.0 + sigma) + 2.0;
  const double mode = argmax_unimodal(log_moment, -reach, reach);
  const double log_lhs =
      log_integral(log_moment, mode, w, spec.abs_tol, spec.max_refinements);
  McdpCheck out = finish_moment_check(log_lhs, sigma, lambda, 1e-8);
  out.p = gaussian_sf(0.0, sigma);
  out.q = out.p;
  return out;
}

HyperbolicSides hyperbolic_sides(double x, double y) {
  if (!(y >= 0.0 && y < x && x <= 2.0)) {
    throw DomainError("hyperbolic_inequality_check: need 0 <= y < x <= 2");
  }
  // sinh x - sinh y = 2 cosh((x+y)/2) sinh((x-y)/2) and
  // sinh(x-y) = 2 sinh((x-y)/2) cosh((x-y)/2), so the ratio needs no
  // cancellation-prone subtraction.
  return {std::cosh(0.5 * (x + y)) / std::cosh(0.5 * (x - y)),
          std::exp(0.5 * x * y)};
}

bool hyperbolic_inequality_check(double x, double y) {
  const HyperbolicSides s = hyperbolic_sides(x, y);
  return s.lhs <= s.rhs * (1.0 + 1e-10);
}

PinskerCheck pinsker_check(const OutcomeDist& p, const OutcomeDist& q,
                           const Eigen::VectorXd& f) {
  if (f.size() != static_cast<Eigen::Index>(p.size())) {
    throw DomainError("pinsker_check: f must have one value per outcome");
  }
  if (!f.allFinite() || f.cwiseAbs().maxCoeff() > 1.0) {
    throw DomainError("pinsker_check: f must take values in [-1, 1]");
  }
  const OutcomeDist q_aligned = q.aligned_to(p);
  const Eigen::VectorXd& pv = p.probs();
  const Eigen::VectorXd& qv = q_aligned.probs();

  PinskerCheck out;
  out.gap = std::abs(pv.dot(f) - qv.dot(f));
  const double kl = kernels::renyi_divergence(pv, qv, RenyiOrder::kl());
  const double d2 = kernels::renyi_divergence(pv, qv, RenyiOrder(2.0));
  out.plain_rhs = std::sqrt(2.0 * kl);
  out.generalized_rhs =
      std::sqrt(qv.dot(f.cwiseAbs2())) * std::sqrt(std::expm1(d2));
  out.plain_ok = out.gap <= out.plain_rhs + 1e-10;
  out.generalized_ok = out.gap <= out.generalized_rhs + 1e-10;
  return out;
}

FiniteSampler::FiniteSampler(OutcomeDist dist) : dist_(std::move(dist)) {
  cumulative_.reserve(dist_.size());
  double running = 0.0;
  for (Eigen::Index i = 0; i < dist_.probs().size(); ++i) {
    running += dist_.probs()(i);
    cumulative_.push_back(running);
  }
  cumulative_.back() = 1.0;
}

Eigen::VectorXd FiniteSampler::sample_counts(std::size_t n,
                                             std::uint64_t seed) const {
  rng::Engine gen(seed);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dist_.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng::uniform01(gen);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                              static_cast<std::ptrdiff_t>(cumulative_.size()) - 1);
    counts(static_cast<Eigen::Index>(idx)) += 1.0;
  }
  return counts;
}

McEstimate mc_divergence_estimate(const FiniteSampler& p_sampler,
                                  const FiniteSampler& q_sampler, double alpha,
                                  std::size_t n_samples, std::uint64_t seed) {
  if (!(alpha > 1.0) || std::isinf(alpha)) {
    throw InvalidOrder("mc_divergence_estimate: alpha must be finite and > 1");
  }
  if (n_samples < 10'000) {
    throw DomainError("mc_divergence_estimate: need at least 10^4 samples");
  }
  const OutcomeDist& p = p_sampler.distribution();
  // Fails with DomainError if the outcome sets differ.
  const OutcomeDist q_reordered = q_sampler.distribution().aligned_to(p);
  const std::vector<Label>& q_order = q_sampler.distribution().outcomes();

  const double n = static_cast<double>(n_samples);
  const Eigen::VectorXd p_hat = p_sampler.sample_counts(n_samples, rng::splitmix64(seed)) / n;
  const Eigen::VectorXd q_raw =
      q_sampler.sample_counts(n_samples, rng::splitmix64(seed ^ 0x5851f42d4c957f2dULL)) / n;
  Eigen::VectorXd q_hat(p_hat.size());
  for (std::size_t i = 0; i < q_order.size(); ++i) {
    q_hat(static_cast<Eigen::Index>(*p.index_of(q_order[i]))) =
        q_raw(static_cast<Eigen::Index>(i));
  }

  McEstimate out;
  for (Eigen::Index i = 0; i < p_hat.size(); ++i) {
    if (p_hat(i) > 0.0 && q_hat(i) == 0.0) {
      out.estimate = kInfinity;
      out.std_error = kInfinity;
      out.support_violation = true;
      return out;
    }
  }

  // S = sum p^a q^(1-a); D = log(S) / (a - 1). Delta method with independent
  // multinomial frequencies for p_hat and q_hat.
  Eigen::VectorXd dp = Eigen::VectorXd::Zero(p_hat.size());
  Eigen::VectorXd dq = Eigen::VectorXd::Zero(p_hat.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < p_hat.size(); ++i) {
    if (p_hat(i) == 0.0) continue;
    const double term = std::pow(p_hat(i), alpha) * std::pow(q_hat(i), 1.0 - alpha);
    s += term;
    dp(i) = alpha * term / p_hat(i);
    dq(i) = (1.0 - alpha) * term / q_hat(i);
  }
  const auto multinomial_var = [n](const Eigen::VectorXd& grad,
                                   const Eigen::VectorXd& freq) {
    const double mean = grad.dot(freq);
    return (grad.cwiseAbs2().dot(freq) - mean * mean) / n;
  };
  const double var_s = multinomial_var(dp, p_hat) + multinomial_var(dq, q_hat);
  out.estimate = std::log(s) / (alpha - 1.0);
  out.std_error = std::sqrt(std::max(var_s, 0.0)) / ((alpha - 1.0) * s);
  return out;
}

McEstimate mc_gaussian_delta(double eta, double eps, std::size_t n_samples,
                             std::uint64_t seed) {
  if (!(eta > 0.0) || std::isinf(eta)) {
    throw DomainError("mc_gaussian_delta: eta must be positive");
  }
  if (n_samples < 2) throw DomainError("mc_gaussian_delta: need >= 2 samples");
  rng::Engine gen(rng::splitmix64(seed));
  const double sd = std::sqrt(2.0 * eta);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double z = eta + sd * rng::normal(gen);
    const double v = z > eps ? -std::expm1(eps - z) : 0.0;
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1.0);
  return {mean, std::sqrt(var / n), false};
}

}  // namespace cdp
