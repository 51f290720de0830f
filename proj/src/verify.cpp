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

#include "cdp/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cdp/accountant.hpp"
#include "cdp/bounds.hpp"
#include "cdp/oracle.hpp"
#include "cdp/rng.hpp"

namespace cdp {
namespace {

constexpr std::array<std::string_view, 6> kSuites = {
    "divergence", "conversions", "group", "mi", "packing", "appendix"};

// Property sweeps inside `verify` are lighter than the acceptance suite.
constexpr int kSweepInstances = 300;

class Recorder {
 public:
  explicit Recorder(std::string suite) { report_.suite = std::move(suite); }

  void le(std::string name, double lhs, double rhs, double tol = 0.0) {
    report_.cases.push_back({std::move(name), lhs <= rhs + tol, lhs, rhs});
  }
  void lt(std::string name, double lhs, double rhs) {
    report_.cases.push_back({std::move(name), lhs < rhs, lhs, rhs});
  }
  void eq(std::string name, double lhs, double rhs, double tol) {
    const bool same = (std::isinf(lhs) && lhs == rhs) || std::abs(lhs - rhs) <= tol;
    report_.cases.push_back({std::move(name), same, lhs, rhs});
  }
  void flag(std::string name, bool pass, double lhs, double rhs) {
    report_.cases.push_back({std::move(name), pass, lhs, rhs});
  }

  SuiteReport take() { return std::move(report_); }

 private:
  SuiteReport report_;
};

OutcomeDist two_point(double a) { return OutcomeDist({"0", "1"}, Eigen::Vector2d(a, 1.0 - a)); }

SuiteReport divergence_suite(std::uint64_t seed) {
  Recorder r("divergence");
  const OutcomeDist p = two_point(0.75);
  const OutcomeDist q = two_point(0.25);
  r.eq("kl_three_quarters", renyi_divergence(p, q, RenyiOrder::kl()),
       0.5 * std::log(3.0), 1e-12);
  r.eq("d2_point_mass_vs_uniform",
       renyi_divergence(two_point(1.0), two_point(0.5), RenyiOrder(2.0)),
       std::numbers::ln2, 1e-12);
  r.eq("d2_from_loss_distribution",
       divergence_from_loss(privacy_loss_dist(p, q), RenyiOrder(2.0)),
       std::log(7.0 / 3.0), 1e-12);
  r.eq("absolute_continuity_failure",
       renyi_divergence(two_point(0.5), two_point(1.0), RenyiOrder(2.0)),
       kInfinity, 0.0);

  double worst = 0.0;
  for (const double alpha : {1.5, 2.0, 5.0, 10.0}) {
    for (const double sigma : {0.5, 1.0, 2.0}) {
      for (const double shift : {0.1, 1.0, 3.0}) {
        const double closed = alpha * shift * shift / (2.0 * sigma * sigma);
        worst = std::max(worst, std::abs(gaussian_renyi_quadrature(shift, sigma, alpha) - closed));
      }
    }
  }
  r.le("gaussian_quadrature_grid_max_error", worst, 1e-6);

  rng::Engine gen(seed);
  const auto orders = default_order_grid();
  double neg = 0.0;
  double mono = 0.0;
  double additivity = 0.0;
  double processing = 0.0;
  double tv_identity = 0.0;
  for (int i = 0; i < kSweepInstances; ++i) {
    const int k = rng::uniform_int(gen, 2, 6);
    const OutcomeDist a = rng::random_dist(gen, k, 0.2);
    const OutcomeDist b = rng::random_dist(gen, k);
    const OutcomeDist c = rng::random_dist(gen, 3);
    const OutcomeDist d = rng::random_dist(gen, 3);
    double previous = 0.0;
    for (const double alpha : orders) {
      const double dab = renyi_divergence(a, b, RenyiOrder(alpha));
      neg = std::min(neg, dab);
      mono = std::max(mono, previous - dab);
      previous = dab;
      const double joint = renyi_divergence(product(a, c), product(b, d), RenyiOrder(alpha));
      const double sum = dab + renyi_divergence(c, d, RenyiOrder(alpha));
      additivity = std::max(additivity, std::abs(joint - sum));
      const auto collapse = [](const Label& l) { return l == "o0" ? Label("o1") : l; };
      processing = std::max(
          processing, renyi_divergence(pushforward(a, collapse), pushforward(b, collapse),
                                       RenyiOrder(alpha)) - dab);
    }
    tv_identity = std::max(tv_identity, std::abs(delta_from_pld(privacy_loss_dist(a, b), 0.0) -
                                                 total_variation(a, b)));
  }
  r.le("nonnegativity_min_violation", -neg, 0.0);
  r.le("monotonicity_max_drop", mono, 0.0, 1e-10);
  r.le("product_additivity_max_error", additivity, 1e-9);
  r.le("data_processing_max_gain", processing, 0.0, 1e-9);
  r.le("pld_delta_at_zero_equals_tv", tv_identity, 1e-12);

  const auto [plus, minus] = randomized_response(std::log(3.0));
  const McEstimate mc = mc_divergence_estimate(FiniteSampler(plus), FiniteSampler(minus), 2.0,
                                               200000, seed);
  const double exact = renyi_divergence(plus, minus, RenyiOrder(2.0));
  r.le("mc_estimate_within_3_std_errors", std::abs(mc.estimate - exact), 3.0 * mc.std_error);

  const McEstimate tail = mc_gaussian_delta(0.5, 0.0, 200000, seed);
  r.le("exact_gaussian_delta_vs_monte_carlo",
       std::abs(tail.estimate - delta_exact_gaussian(0.5, 0.0)), 3.0 * tail.std_error);
  return r.take();
}

SuiteReport conversions_suite(std::uint64_t seed) {
  Recorder r("conversions");
  const ZcdpParams half(0.0, 0.5);
  r.eq("simple_eps_at_delta_e_inverse", zcdp_to_dp_simple(half, std::exp(-1.0)).eps(),
       0.5 + std::numbers::sqrt2, 1e-12);
  r.eq("refined_delta_rho_half_eps_2_5", zcdp_to_dp_refined(half, 2.5),
       0.0423054234195778, 1e-12);
  r.eq("approx_zcdp_to_dp", approx_zcdp_to_dp(ZcdpParams(0.0, 0.5, 0.1), 2.5).delta(),
       0.13807488107762, 1e-12);

  double exact_gap = -kInfinity;
  double refined_gap = -kInfinity;
  for (const double rho : {0.05, 0.125, 0.5, 2.0}) {
    const ZcdpParams params(0.0, rho);
    for (int i = 0; i < 50; ++i) {
      const double eps = rho + 6.0 * std::sqrt(rho) * i / 49.0;
      const double refined = zcdp_to_dp_refined(params, eps);
      exact_gap = std::max(exact_gap, delta_exact_gaussian(rho, eps) - refined);
      refined_gap = std::max(refined_gap, refined - zcdp_to_dp_simple_delta(params, eps));
    }
  }
  r.le("exact_gaussian_below_refined", exact_gap, 0.0, 1e-15);
  r.le("refined_below_simple", refined_gap, 0.0, 1e-15);

  rng::Engine gen(seed);
  double branch = -kInfinity;
  for (int i = 0; i < kSweepInstances; ++i) {
    const double rho = std::exp(rng::uniform(gen, std::log(1e-3), std::log(10.0)));
    const double eps = rho + rng::uniform(gen, 0.0, 10.0 * std::sqrt(rho));
    const auto b = refined_branches(ZcdpParams(0.0, rho), eps);
    branch = std::max(branch, b[3] - std::min(b[1], b[2]));
  }
  r.le("fourth_branch_dominates", branch, 0.0, 1e-15);

  const auto [pure_form, quad_form] = pure_dp_to_zcdp(1.0);
  r.eq("pure_dp_quadratic_form", quad_form.rho(), 0.5, 0.0);
  r.eq("pure_dp_linear_form", pure_form.xi(), 1.0, 0.0);
  const ZcdpParams fam = dp_family_to_zcdp(0.0, 1.0);
  r.eq("dp_family_xi", fam.xi(), 4.75, 1e-12);
  r.eq("dp_family_rho", fam.rho(), 0.25, 1e-12);
  const ZcdpParams from_mcdp = mcdp_to_zcdp(McdpParams(1.0, 1.0));
  r.eq("mcdp_to_zcdp_xi", from_mcdp.xi(), 0.5, 1e-12);
  r.eq("mcdp_to_zcdp_rho", from_mcdp.rho(), 0.5, 1e-12);
  r.eq("zcdp_to_mcdp_tau", zcdp_to_mcdp(half).tau(), 3.70759418325042, 1e-12);

  double shrink = -kInfinity;
  for (const double xi : {0.0, 0.1, 1.0}) {
    for (const double rho : {0.01, 0.1, 0.5, 1.0, 4.0}) {
      const ZcdpParams z(xi, rho);
      // mcdp_to_zcdp rejects these points (mu < tau^2/2), so only the rho
      // half of the map is applied.
      const double tau = zcdp_to_mcdp(z).tau();
      shrink = std::max(shrink, rho - 0.5 * tau * tau);
    }
  }
  r.le("mcdp_round_trip_never_shrinks_rho", shrink, 0.0, 1e-12);

  const std::vector<DpPoint> steps(100, DpPoint(0.1, 0.0));
  const double cor = dp_composition_bound(steps, 1e-6).eps();
  r.eq("composition_eps_k100", cor, 5.79930220134859, 1e-9);
  r.lt("composition_beats_advanced", cor, advanced_composition_eps(steps, 1e-6));

  const double sigma = calibrate_sigma_for_dp(1.0, 1.0, 1e-6);
  r.le("calibrated_sigma_meets_delta",
       zcdp_to_dp_refined(ZcdpParams(0.0, 1.0 / (2.0 * sigma * sigma)), 1.0), 1e-6);
  r.le("calibrated_sigma_below_simple", sigma, calibrate_sigma_for_dp_simple(1.0, 1.0, 1e-6));
  return r.take();
}

SuiteReport group_suite(std::uint64_t) {
  Recorder r("group");
  const ZcdpParams g3 = group_privacy(ZcdpParams(0.0, 0.1), 3);
  r.eq("rho_scales_k_squared", g3.rho(), 0.9, 1e-12);
  r.eq("xi_scales_k_harmonic", group_privacy(ZcdpParams(0.1, 0.0), 2).xi(), 0.3, 1e-12);

  QuadratureSpec tight;
  tight.abs_tol = 1e-12;
  const double sigma = 2.0;
  const double rho = gaussian_rho(GaussianMech(1.0, sigma));
  for (const int k : {1, 2, 5}) {
    const double claimed = group_privacy(ZcdpParams(0.0, rho), k).rho();
    for (const double alpha : {1.5, 2.0, 5.0}) {
      const double d = gaussian_renyi_quadrature(static_cast<double>(k), sigma, alpha, tight);
      r.eq("gaussian_group_k" + std::to_string(k) + "_alpha" + std::to_string(alpha).substr(0, 3),
           d, claimed * alpha, 1e-10);
    }
  }
  return r.take();
}

SuiteReport mi_suite(std::uint64_t) {
  Recorder r("mi");
  const OutcomeDist bit = OutcomeDist::uniform({"0", "1"});
  const FiniteChannel bsc({"0", "1"}, {two_point(0.75), two_point(0.25)});
  r.eq("binary_symmetric_channel", mutual_information(bit, bsc), 0.130812035941137, 1e-12);

  const double eps = 1.0;
  const ZcdpParams params(0.0, 0.5 * eps * eps);
  for (int n = 1; n <= 6; ++n) {
    const FiniteChannel channel = randomized_response_channel(eps, n);
    const bool certified = certify_zcdp(channel, params).certified;
    const std::string tag = "_n" + std::to_string(n);
    r.flag("certified_zcdp" + tag, certified, 0.0, 0.0);
    r.le("independent" + tag, mutual_information(independent_uniform_prior(n), channel),
         mi_bound(params, n, MiStructure::independent()), 1e-12);
    r.le("correlated" + tag, mutual_information(correlated_prior(n), channel),
         mi_bound(params, n, MiStructure::general()), 1e-12);
  }
  for (const auto& [m, l] : {std::pair{2, 2}, std::pair{2, 3}}) {
    const FiniteChannel channel = randomized_response_channel(eps, m * l);
    r.le("blocks_m" + std::to_string(m) + "_l" + std::to_string(l),
         mutual_information(block_prior(m, l), channel),
         mi_bound(params, m * l, MiStructure::blocks_of(m, l)), 1e-12);
  }

  // Post-processing by keeping only the first bit cannot add information.
  const FiniteChannel channel = randomized_response_channel(eps, 3);
  std::vector<OutcomeDist> first_bit;
  for (std::size_t i = 0; i < channel.num_inputs(); ++i) {
    first_bit.push_back(
        pushforward(channel.conditional(i), [](const Label& l) { return l.substr(0, 1); }));
  }
  const FiniteChannel reduced(channel.inputs(), std::move(first_bit));
  const OutcomeDist prior = independent_uniform_prior(3);
  r.le("pushforward_does_not_increase_mi", mutual_information(prior, reduced),
       mutual_information(prior, channel), 1e-12);
  return r.take();
}

SuiteReport packing_suite(std::uint64_t seed) {
  Recorder r("packing");
  const std::array<double, 4> line = {0.0, 1.0, 2.0, 3.0};
  const auto net = greedy_packing_net(MetricPointSet::on_line(line), 1.0);
  r.flag("line_greedy_net", net == std::vector<Label>{"0", "2"},
         static_cast<double>(net.size()), 2.0);

  rng::Engine gen(seed);
  int passed = 0;
  constexpr int kSpaces = 100;
  for (int s = 0; s < kSpaces; ++s) {
    const int n = rng::uniform_int(gen, 2, 30);
    Eigen::MatrixXd pts(2, n);
    for (int i = 0; i < n; ++i) pts.col(i) << rng::uniform01(gen), rng::uniform01(gen);
    const double alpha = rng::uniform(gen, 0.05, 0.8);
    const auto dist = [&pts](std::size_t a, std::size_t b) {
      return (pts.col(static_cast<Eigen::Index>(a)) - pts.col(static_cast<Eigen::Index>(b))).norm();
    };
    const auto chosen = greedy_packing_net_indices(static_cast<std::size_t>(n), dist, alpha);
    const std::span<const std::size_t> view(chosen);
    if (is_packing(view, dist, alpha) && is_net(static_cast<std::size_t>(n), view, dist, alpha)) {
      ++passed;
    }
  }
  r.eq("random_metric_spaces_pass", passed, kSpaces, 0.0);

  const PackingBound bound = packing_lower_bound(16, 0.5, ZcdpParams(0.0, 0.1), 3);
  r.eq("packing_min_n", bound.min_n_pure, 2.63276884773416, 1e-12);
  r.flag("packing_n3_consistent", bound.consistent, bound.lhs, bound.rhs);
  r.flag("packing_n2_inconsistent",
         !packing_lower_bound(16, 0.5, ZcdpParams(0.0, 0.1), 2).consistent, 0.0, 0.0);

  Eigen::MatrixXd queries(2, 3);
  queries << 0.0, 0.5, 1.0,
             1.0, 0.0, 0.25;
  const PurifiedMechanism mech = purify(queries, 4, 1.0, 0.05, QueryNorm::kLinf);
  r.le("purified_mechanism_is_pure_dp", mech.max_neighbor_divergence(), 1.0, 1e-9);
  double mass = 0.0;
  for (const Histogram& h : mech.datasets()) {
    mass = std::max(mass, std::abs(mech.output_distribution(h).probs().sum() - 1.0));
  }
  r.le("purified_outputs_normalized", mass, 1e-12);
  return r.take();
}

SuiteReport appendix_suite(std::uint64_t seed) {
  Recorder r("appendix");
  const McdpCheck bad = mcdp_postprocess_violation(1.0, 3.0, 2.0);
  r.flag("thresholded_gaussian_violates_mcdp", bad.violated, bad.lhs, bad.rhs);
  const McdpCheck far = mcdp_postprocess_violation(1.0, 7.0, 3.5);
  r.flag("thresholded_gaussian_violates_mcdp_t7", far.violated, far.lhs, far.rhs);
  const McdpCheck raw = gaussian_mcdp_check(1.0, 2.0);
  r.flag("raw_gaussian_satisfies_mcdp", !raw.violated, raw.lhs, raw.rhs);

  double worst_ratio = 0.0;
  for (int i = 1; i <= 200; ++i) {
    for (int j = 0; j < i; ++j) {
      const HyperbolicSides s = hyperbolic_sides(0.01 * i, 0.01 * j);
      worst_ratio = std::max(worst_ratio, s.lhs / s.rhs);
    }
  }
  r.le("hyperbolic_grid_worst_ratio", worst_ratio, 1.0 + 1e-10);

  rng::Engine gen(seed);
  int plain = 0;
  int generalized = 0;
  constexpr int kTriples = 1000;
  for (int i = 0; i < kTriples; ++i) {
    const int k = rng::uniform_int(gen, 2, 6);
    const OutcomeDist p = rng::random_dist(gen, k, 0.2);
    const OutcomeDist q = rng::random_dist(gen, k);
    Eigen::VectorXd f(k);
    for (int j = 0; j < k; ++j) f(j) = rng::uniform(gen, -1.0, 1.0);
    const PinskerCheck c = pinsker_check(p, q, f);
    plain += c.plain_ok ? 1 : 0;
    generalized += c.generalized_ok ? 1 : 0;
  }
  r.eq("pinsker_plain_sweep", plain, kTriples, 0.0);
  r.eq("pinsker_generalized_sweep", generalized, kTriples, 0.0);
  return r.take();
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const VerifyCase& c) { return c.pass; });
}

std::span<const std::string_view> suite_names() { return kSuites; }

SuiteReport run_suite(std::string_view suite, std::uint64_t seed) {
  if (suite == "divergence") return divergence_suite(seed);
  if (suite == "conversions") return conversions_suite(seed);
  if (suite == "group") return group_suite(seed);
  if (suite == "mi") return mi_suite(seed);
  if (suite == "packing") return packing_suite(seed);
  if (suite == "appendix") return appendix_suite(seed);
  throw DomainError("unknown verify suite '" + std::string(suite) + "'");
}

}  // namespace cdp
