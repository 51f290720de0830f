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


// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cdp/accountant.hpp"
#include "cdp/bounds.hpp"
#include "cdp/mechanisms.hpp"
#include "cdp/oracle.hpp"
#include "cdp/rng.hpp"

#ifndef CDP_ACCT_BINARY
#define CDP_ACCT_BINARY "cdp_acct"
#endif

namespace {

using namespace cdp;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

constexpr int kInstances = 1000;
constexpr double kTol = 1e-9;

// 1
Outcome gaussian_closed_form() {
  double worst = 0.0;
  int points = 0;
  for (const double alpha : {1.5, 2.0, 5.0, 10.0}) {
    for (const double sigma : {0.5, 1.0, 2.0}) {
      for (const double shift : {0.1, 1.0, 3.0}) {
        const double closed = alpha * shift * shift / (2.0 * sigma * sigma);
        worst = std::max(worst, std::abs(gaussian_renyi_quadrature(shift, sigma, alpha) - closed));
        ++points;
      }
    }
  }
  return {worst <= 1e-6 && points == 36,
          std::to_string(points) + " points, max error " + fmt("%.3e", worst)};
}

// 2
Outcome renyi_calculus() {
  rng::Engine gen(20160516);
  const auto orders = default_order_grid();
  int bad_neg = 0, bad_mono = 0, bad_add = 0, bad_dp = 0, bad_quasi = 0, bad_tri = 0;
  int triangle_cases = 0;
  for (int i = 0; i < kInstances; ++i) {
    const int k = rng::uniform_int(gen, 2, 6);
    const OutcomeDist p = rng::random_dist(gen, k, 0.2);
    const OutcomeDist q = rng::random_dist(gen, k);
    const OutcomeDist r = rng::random_dist(gen, k);
    const OutcomeDist p1 = rng::random_dist(gen, k, 0.2);
    const OutcomeDist q1 = rng::random_dist(gen, k);
    const OutcomeDist c = rng::random_dist(gen, 3, 0.2);
    const OutcomeDist d = rng::random_dist(gen, 3);
    const double t = rng::uniform01(gen);
    const auto merge = [](const Label& l) { return l == "o0" ? Label("o1") : l; };
    const OutcomeDist pm = mixture(p, p1, t);
    const OutcomeDist qm = mixture(q, q1, t);

    double previous = 0.0;
    bool neg = false, mono = false, add = false, proc = false, quasi = false;
    for (const double alpha : orders) {
      const RenyiOrder a(alpha);
      const double dpq = renyi_divergence(p, q, a);
      if (dpq < -kTol) neg = true;
      if (dpq < previous - kTol) mono = true;
      previous = dpq;
      const double joint = renyi_divergence(product(p, c), product(q, d), a);
      const double sum = dpq + renyi_divergence(c, d, a);
      if (!(std::abs(joint - sum) <= kTol * std::max(1.0, std::abs(sum)))) add = true;
      if (renyi_divergence(pushforward(p, merge), pushforward(q, merge), a) > dpq + kTol) {
        proc = true;
      }
      const double worst = std::max(dpq, renyi_divergence(p1, q1, a));
      if (renyi_divergence(pm, qm, a) > worst + kTol) quasi = true;
    }
    bad_neg += neg;
    bad_mono += mono;
    bad_add += add;
    bad_dp += proc;
    bad_quasi += quasi;

    bool tri = false;
    for (const double kk : {1.5, 2.0, 4.0}) {
      for (const double alpha : {1.5, 2.0, 4.0}) {
        const double ka = kk * alpha;
        const double lhs = renyi_divergence(p, q, RenyiOrder(alpha));
        const double rhs = ka / (ka - 1.0) * renyi_divergence(p, r, RenyiOrder((ka - 1.0) / (kk - 1.0))) +
                           renyi_divergence(r, q, RenyiOrder(ka));
        if (lhs > rhs + kTol) tri = true;
        ++triangle_cases;
      }
    }
    bad_tri += tri;
  }
  const int bad = bad_neg + bad_mono + bad_add + bad_dp + bad_quasi + bad_tri;
  std::ostringstream s;
  s << kInstances << " instances each; failures: nonneg " << bad_neg << ", monotone " << bad_mono
    << ", additivity " << bad_add << ", data processing " << bad_dp << ", quasi-convexity "
    << bad_quasi << ", triangle-like " << bad_tri << " (" << triangle_cases << " (k, alpha) cases)";
  return {bad == 0, s.str()};
}

// 3
Outcome conversion_soundness() {
  double exact_gap = -kInfinity;
  double refined_gap = -kInfinity;
  double branch_gap = -kInfinity;
  for (const double rho : {0.05, 0.125, 0.5, 2.0}) {
    const ZcdpParams params(0.0, rho);
    for (int i = 0; i < 50; ++i) {
      const double eps = rho + 6.0 * std::sqrt(rho) * i / 49.0;
      const double refined = zcdp_to_dp_refined(params, eps);
      exact_gap = std::max(exact_gap, delta_exact_gaussian(rho, eps) - refined);
      refined_gap = std::max(refined_gap, refined - zcdp_to_dp_simple_delta(params, eps));
      const auto b = refined_branches(params, eps);
      branch_gap = std::max(branch_gap, b[3] - std::min(b[1], b[2]));
    }
  }
  const bool pass = exact_gap <= 0.0 && refined_gap <= 0.0 && branch_gap <= 0.0;
  return {pass, "200 points; max(exact - refined) " + fmt("%.3e", exact_gap) +
                    ", max(refined - simple) " + fmt("%.3e", refined_gap) +
                    ", max(branch4 - min(branch2, branch3)) " + fmt("%.3e", branch_gap)};
}

// 4
Outcome randomized_response_curve() {
  double excess = -kInfinity;
  double dmax_err = 0.0;
  for (const double eps : {0.1, 0.5, 1.0, 2.0}) {
    const auto [plus, minus] = randomized_response(eps);
    for (const double alpha : default_order_grid()) {
      if (std::isinf(alpha)) continue;
      const double d = renyi_divergence(plus, minus, RenyiOrder(alpha));
      excess = std::max(excess, d - 0.5 * eps * eps * alpha);
    }
    dmax_err = std::max(dmax_err, std::abs(renyi_divergence(plus, minus, RenyiOrder::max()) - eps));
  }
  return {excess <= 0.0 && dmax_err <= 1e-10,
          "max(D_alpha - eps^2 alpha / 2) " + fmt("%.3e", excess) + ", |D_inf - eps| " +
              fmt("%.3e", dmax_err)};
}

// 5
Outcome group_tightness() {
  QuadratureSpec tight;
  tight.abs_tol = 1e-12;
  const double delta = 1.0;
  const double sigma = 2.0;
  const double rho = delta * delta / (2.0 * sigma * sigma);
  double worst = 0.0;
  for (const int k : {1, 2, 5}) {
    const double claimed = group_privacy(ZcdpParams(0.0, rho), k).rho();
    for (const double alpha : {1.5, 2.0, 5.0}) {
      const double d = gaussian_renyi_quadrature(k * delta, sigma, alpha, tight);
      worst = std::max(worst, std::abs(d - k * k * rho * alpha));
      worst = std::max(worst, std::abs(claimed - k * k * rho));
    }
  }
  return {worst <= 1e-10, "k in {1,2,5}, max error " + fmt("%.3e", worst)};
}

// 6
Outcome mutual_information_bounds() {
  int cases = 0;
  int failures = 0;
  for (const double eps : {0.3, 1.0}) {
    const ZcdpParams params(0.0, 0.5 * eps * eps);
    for (int n = 1; n <= 8; ++n) {
      const FiniteChannel channel = randomized_response_channel(eps, n);
      const double indep = mutual_information(independent_uniform_prior(n), channel);
      const double corr = mutual_information(correlated_prior(n), channel);
      failures += indep > 0.5 * eps * eps * n + kTol;
      failures += corr > 0.5 * eps * eps * n * n + kTol;
      failures += indep > mi_bound(params, n, MiStructure::independent()) + kTol;
      failures += corr > mi_bound(params, n, MiStructure::general()) + kTol;
      cases += 4;
    }
    for (const auto& [m, l] : {std::pair{2, 2}, std::pair{2, 3}}) {
      const FiniteChannel channel = randomized_response_channel(eps, m * l);
      failures += mutual_information(block_prior(m, l), channel) >
                  mi_bound(params, m * l, MiStructure::blocks_of(m, l)) + kTol;
      ++cases;
    }
  }
  return {failures == 0, std::to_string(cases) + " bounds, " + std::to_string(failures) + " violated"};
}

// 7
Outcome packing_and_nets() {
  rng::Engine gen(2024);
  int passed = 0;
  constexpr int kSpaces = 100;
  for (int s = 0; s < kSpaces; ++s) {
    const int n = rng::uniform_int(gen, 2, 40);
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = rng::uniform01(gen);
    }
    const double alpha = rng::uniform(gen, 0.05, 0.9);
    const auto d = [&dist](std::size_t a, std::size_t b) {
      return dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    };
    const auto chosen = greedy_packing_net_indices(static_cast<std::size_t>(n), d, alpha);
    const std::span<const std::size_t> view(chosen);
    passed += is_packing(view, d, alpha) && is_net(static_cast<std::size_t>(n), view, d, alpha);
  }
  const PackingBound bound = packing_lower_bound(16, 0.5, ZcdpParams(0.0, 0.1), 3);
  const bool bound_ok = std::abs(bound.min_n_pure - 2.633) < 5e-4;
  return {passed == kSpaces && bound_ok,
          std::to_string(passed) + "/" + std::to_string(kSpaces) + " spaces pass; n >= " +
              fmt("%.6f", bound.min_n_pure)};
}

// 8
Outcome mcdp_counterexample() {
  const McdpCheck bad = mcdp_postprocess_violation(1.0, 3.0, 2.0);
  const McdpCheck raw = gaussian_mcdp_check(1.0, 2.0);
  return {bad.violated && bad.lhs > std::exp(8.0) && !raw.violated,
          "thresholded lhs " + fmt("%.6g", bad.lhs) + " vs " + fmt("%.6g", bad.rhs) +
              "; raw lhs " + fmt("%.6g", raw.lhs) + " vs " + fmt("%.6g", raw.rhs)};
}

// 9
Outcome hyperbolic_and_pinsker() {
  int grid_failures = 0;
  int grid_points = 0;
  for (int i = 1; i <= 200; ++i) {
    for (int j = 0; j < i; ++j) {
      grid_failures += !hyperbolic_inequality_check(0.01 * i, 0.01 * j);
      ++grid_points;
    }
  }
  rng::Engine gen(99);
  int plain = 0;
  int generalized = 0;
  for (int i = 0; i < kInstances; ++i) {
    const int k = rng::uniform_int(gen, 2, 6);
    const OutcomeDist p = rng::random_dist(gen, k, 0.2);
    const OutcomeDist q = rng::random_dist(gen, k);
    Eigen::VectorXd f(k);
    for (int j = 0; j < k; ++j) f(j) = rng::uniform(gen, -1.0, 1.0);
    const PinskerCheck c = pinsker_check(p, q, f);
    plain += c.plain_ok;
    generalized += c.generalized_ok;
  }
  return {grid_failures == 0 && plain == kInstances && generalized == kInstances,
          std::to_string(grid_points) + " grid points (" + std::to_string(grid_failures) +
              " fail); Pinsker " + std::to_string(plain) + "/" + std::to_string(generalized) +
              " of " + std::to_string(kInstances)};
}

// 10
Outcome composition_improvement() {
  const std::vector<DpPoint> steps(100, DpPoint(0.1, 0.0));
  const double cor = dp_composition_bound(steps, 1e-6).eps();
  const double adv = advanced_composition_eps(steps, 1e-6);
  return {cor < adv, "eps " + fmt("%.6f", cor) + " < advanced " + fmt("%.6f", adv)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 11
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("cdp_acct_acceptance_" + std::to_string(std::rand()));
  std::filesystem::create_directories(dir);
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    const auto path = dir / ("curve" + std::to_string(run) + ".csv");
    const std::string cmd = std::string("\"") + CDP_ACCT_BINARY +
                            "\" curve --rho 0.5 --grid 0.5:6:400 --method refined --seed 7 --out \"" +
                            path.string() + "\"";
    if (std::system(cmd.c_str()) != 0) {
      std::filesystem::remove_all(dir);
      return {false, "cdp_acct curve failed"};
    }
    outputs.push_back(slurp(path));
  }
  std::filesystem::remove_all(dir);
  const bool curve_same = !outputs[0].empty() && outputs[0] == outputs[1];

  const auto [plus, minus] = randomized_response(1.0);
  const McEstimate a =
      mc_divergence_estimate(FiniteSampler(plus), FiniteSampler(minus), 2.0, 100000, 7);
  const McEstimate b =
      mc_divergence_estimate(FiniteSampler(plus), FiniteSampler(minus), 2.0, 100000, 7);
  const bool mc_same = std::memcmp(&a.estimate, &b.estimate, sizeof(double)) == 0 &&
                       std::memcmp(&a.std_error, &b.std_error, sizeof(double)) == 0;
  return {curve_same && mc_same, std::string("curve bytes ") + (curve_same ? "match" : "differ") +
                                     " (" + std::to_string(outputs[0].size()) + " B), mc " +
                                     (mc_same ? "match" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gaussian_closed_form_quadrature", gaussian_closed_form},
      {"renyi_calculus_properties", renyi_calculus},
      {"conversion_soundness", conversion_soundness},
      {"randomized_response_eps_squared", randomized_response_curve},
      {"group_privacy_k_squared", group_tightness},
      {"mutual_information_bounds", mutual_information_bounds},
      {"packing_nets_and_lower_bound", packing_and_nets},
      {"mcdp_postprocessing_counterexample", mcdp_counterexample},
      {"hyperbolic_and_pinsker", hyperbolic_and_pinsker},
      {"composition_beats_advanced", composition_improvement},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index++ << "] " << name << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
