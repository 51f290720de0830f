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


#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "cdp/accountant.hpp"
#include "cdp/mechanisms.hpp"
#include "cdp/oracle.hpp"
#include "cdp/rng.hpp"

namespace cdp {
namespace {

OutcomeDist bit(double p0) { return OutcomeDist({"0", "1"}, Eigen::Vector2d(p0, 1.0 - p0)); }

TEST(Quadrature, MatchesClosedFormOnGrid) {
  for (const double alpha : {1.5, 2.0, 5.0, 10.0}) {
    for (const double sigma : {0.5, 1.0, 2.0}) {
      for (const double shift : {0.1, 1.0, 3.0}) {
        const double closed = alpha * shift * shift / (2.0 * sigma * sigma);
        EXPECT_NEAR(gaussian_renyi_quadrature(shift, sigma, alpha), closed, 1e-6)
            << alpha << ' ' << sigma << ' ' << shift;
      }
    }
  }
}

TEST(Quadrature, Examples) {
  EXPECT_NEAR(gaussian_renyi_quadrature(1.0, 1.0, 2.0), 1.0, 1e-6);
  EXPECT_NEAR(gaussian_renyi_quadrature(0.0, 1.0, 3.0), 0.0, 1e-10);
  EXPECT_NEAR(gaussian_renyi_quadrature(3.0, 2.0, 10.0), 11.25, 1e-6);
}

TEST(Quadrature, KlEndpoint) {
  EXPECT_NEAR(gaussian_kl_quadrature(1.0, 1.0), 0.5, 1e-8);
  EXPECT_NEAR(gaussian_kl_quadrature(3.0, 2.0), 9.0 / 8.0, 1e-8);
}

TEST(Quadrature, SpecValidation) {
  QuadratureSpec narrow;
  narrow.half_width_sigmas = 4.0;
  EXPECT_THROW(gaussian_renyi_quadrature(1.0, 1.0, 2.0, narrow), DomainError);
  QuadratureSpec starved;
  starved.abs_tol = 1e-300;
  starved.max_refinements = 1;
  EXPECT_THROW(gaussian_renyi_quadrature(1.0, 1.0, 2.0, starved), NonConvergence);
  EXPECT_THROW(gaussian_renyi_quadrature(1.0, 1.0, 1.0), InvalidOrder);
}

TEST(DeltaFromPld, Examples) {
  const PrivacyLossDist z = privacy_loss_dist(bit(0.75), bit(0.25));
  EXPECT_NEAR(delta_from_pld(z, 0.0), 0.5, 1e-15);
  EXPECT_EQ(delta_from_pld(z, std::log(3.0)), 0.0);
  EXPECT_EQ(delta_from_pld(z, 10.0), 0.0);
  const PrivacyLossDist inf = privacy_loss_dist(bit(0.5), bit(1.0));
  EXPECT_NEAR(delta_from_pld(inf, 100.0), 0.5, 1e-15);
}

TEST(DeltaFromPld, EqualsTotalVariationAtZeroAndIsMonotone) {
  rng::Engine gen(5);
  for (int i = 0; i < 500; ++i) {
    const int k = rng::uniform_int(gen, 2, 6);
    const OutcomeDist p = rng::random_dist(gen, k, 0.2);
    const OutcomeDist q = rng::random_dist(gen, k, 0.2);
    const PrivacyLossDist z = privacy_loss_dist(p, q);
    ASSERT_NEAR(delta_from_pld(z, 0.0), total_variation(p, q), 1e-12);
    double prev = 1.0;
    for (double eps = 0.0; eps < 5.0; eps += 0.25) {
      const double d = delta_from_pld(z, eps);
      ASSERT_LE(d, prev + 1e-15);
      prev = d;
    }
  }
}

TEST(DeltaFromPld, BelowLossTailBound) {
  for (const double eps0 : {0.2, 0.7, 1.5}) {
    const auto [plus, minus] = randomized_response(eps0);
    const PrivacyLossDist z = privacy_loss_dist(plus, minus);
    const double rho = 0.5 * eps0 * eps0;
    for (double lambda = 0.05; lambda < 3.0; lambda += 0.05) {
      const double threshold = lambda + rho;
      EXPECT_LE(delta_from_pld(z, threshold), z.tail_mass(threshold));
      EXPECT_LE(z.tail_mass(threshold), loss_tail_bound(0.0, rho, lambda) + 1e-15);
    }
  }
}

TEST(DeltaExactGaussian, Examples) {
  EXPECT_NEAR(delta_exact_gaussian(0.5, 0.0), 0.382924922548026, 1e-14);
  EXPECT_NEAR(delta_exact_gaussian(0.5, 0.0), 2.0 * 0.691462461274013 - 1.0, 1e-14);
  EXPECT_NEAR(delta_exact_gaussian(0.5, 2.5), 0.00630500733028, 1e-13);
  EXPECT_EQ(delta_exact_gaussian(0.5, kInfinity), 0.0);
  EXPECT_LT(delta_exact_gaussian(0.5, 60.0), 1e-300);
  EXPECT_LE(delta_exact_gaussian(0.5, 2.5), zcdp_to_dp_refined(ZcdpParams(0.0, 0.5), 2.5));
  EXPECT_THROW(delta_exact_gaussian(0.0, 1.0), DomainError);
}

TEST(DeltaExactGaussian, AgreesWithMonteCarloTailFunctional) {
  for (const auto& [eta, eps] : {std::pair{0.5, 0.0}, std::pair{0.5, 1.0}, std::pair{2.0, 2.5}}) {
    const McEstimate mc = mc_gaussian_delta(eta, eps, 1000000, 31337);
    EXPECT_LE(std::abs(mc.estimate - delta_exact_gaussian(eta, eps)), 3.0 * mc.std_error)
        << eta << ' ' << eps;
  }
}

TEST(DeltaExactGaussian, BelowEveryAccountantBound) {
  for (const double rho : {0.01, 0.05, 0.125, 0.5, 2.0, 8.0}) {
    const ZcdpParams p(0.0, rho);
    for (int i = 0; i < 100; ++i) {
      const double eps = rho + 8.0 * std::sqrt(rho) * i / 99.0;
      const double exact = delta_exact_gaussian(rho, eps);
      ASSERT_LE(exact, zcdp_to_dp_refined(p, eps) + 1e-15);
      ASSERT_LE(exact, zcdp_to_dp_simple_delta(p, eps) + 1e-15);
    }
  }
}

TEST(McdpViolation, ThresholdThreeLambdaTwo) {
  const McdpCheck c = mcdp_postprocess_violation(1.0, 3.0, 2.0);
  EXPECT_TRUE(c.violated);
  EXPECT_NEAR(c.p, 0.0227501319481792, 1e-15);
  EXPECT_NEAR(c.q, 3.16712418331199e-5, 1e-17);
  EXPECT_NEAR(c.rhs, std::exp(8.0), 1e-9);
  EXPECT_NEAR(c.lhs, 8707.137, 1e-3);
  EXPECT_GT(c.lhs, c.rhs);
}

TEST(McdpViolation, LargeThresholdRegime) {
  EXPECT_TRUE(mcdp_postprocess_violation(1.0, 7.0, 3.5).violated);
}

TEST(McdpViolation, ZeroLambdaIsNeverViolated) {
  const McdpCheck c = mcdp_postprocess_violation(1.0, 3.0, 0.0);
  EXPECT_FALSE(c.violated);
  EXPECT_NEAR(c.lhs, 1.0, 1e-15);
  EXPECT_EQ(c.rhs, 1.0);
}

TEST(McdpViolation, RawGaussianMeetsBoundWithEquality) {
  for (const double sigma : {0.5, 1.0, 2.0}) {
    for (const double lambda : {0.5, 1.0, 2.0, 3.5}) {
      const McdpCheck c = gaussian_mcdp_check(sigma, lambda);
      EXPECT_FALSE(c.violated) << sigma << ' ' << lambda;
      EXPECT_NEAR(std::log(c.lhs), std::log(c.rhs), 1e-7);
    }
  }
}

TEST(Hyperbolic, Examples) {
  const HyperbolicSides end = hyperbolic_sides(2.0, 0.0);
  EXPECT_NEAR(end.lhs, 1.0, 1e-15);
  EXPECT_EQ(end.rhs, 1.0);
  EXPECT_TRUE(hyperbolic_inequality_check(2.0, 0.0));
  const HyperbolicSides mid = hyperbolic_sides(1.0, 0.5);
  EXPECT_NEAR(mid.lhs, (std::sinh(1.0) - std::sinh(0.5)) / std::sinh(0.5), 1e-14);
  EXPECT_NEAR(mid.lhs, 1.25525193041276, 1e-13);
  EXPECT_NEAR(mid.rhs, 1.28402541668774, 1e-13);
  EXPECT_THROW(hyperbolic_sides(1.0, 1.0), DomainError);
  EXPECT_THROW(hyperbolic_sides(2.5, 1.0), DomainError);
  EXPECT_THROW(hyperbolic_sides(1.0, -0.1), DomainError);
}

TEST(Hyperbolic, FullGrid) {
  for (int i = 1; i <= 200; ++i) {
    for (int j = 0; j < i; ++j) {
      ASSERT_TRUE(hyperbolic_inequality_check(0.01 * i, 0.01 * j)) << i << ' ' << j;
    }
  }
}

TEST(Pinsker, Examples) {
  const PinskerCheck same = pinsker_check(bit(0.3), bit(0.3), Eigen::Vector2d(1.0, -1.0));
  EXPECT_EQ(same.gap, 0.0);
  EXPECT_TRUE(same.plain_ok && same.generalized_ok);
  const PinskerCheck skew = pinsker_check(bit(0.75), bit(0.25), Eigen::Vector2d(1.0, -1.0));
  EXPECT_NEAR(skew.gap, 1.0, 1e-15);
  EXPECT_NEAR(skew.plain_rhs, std::sqrt(std::log(3.0)), 1e-15);
  EXPECT_TRUE(skew.plain_ok);
  EXPECT_TRUE(skew.generalized_ok);
  EXPECT_THROW(pinsker_check(bit(0.5), bit(0.5), Eigen::Vector2d(2.0, 0.0)), DomainError);
}

TEST(Pinsker, RandomTriples) {
  rng::Engine gen(77);
  for (int i = 0; i < 1000; ++i) {
    const int k = rng::uniform_int(gen, 2, 6);
    const OutcomeDist p = rng::random_dist(gen, k, 0.2);
    const OutcomeDist q = rng::random_dist(gen, k);
    Eigen::VectorXd f(k);
    for (int j = 0; j < k; ++j) f(j) = rng::uniform(gen, -1.0, 1.0);
    const PinskerCheck c = pinsker_check(p, q, f);
    ASSERT_TRUE(c.plain_ok);
    ASSERT_TRUE(c.generalized_ok);
  }
}

TEST(MonteCarlo, IdenticalSamplersGiveNearZero) {
  const OutcomeDist d({"a", "b", "c"}, Eigen::Vector3d(0.2, 0.3, 0.5));
  const McEstimate e = mc_divergence_estimate(FiniteSampler(d), FiniteSampler(d), 2.0, 1000000, 1);
  EXPECT_LT(std::abs(e.estimate), 0.01);
}

TEST(MonteCarlo, RandomizedResponseWithinThreeStdErrors) {
  const auto [plus, minus] = randomized_response(std::log(3.0));
  const double exact = renyi_divergence(plus, minus, RenyiOrder(2.0));
  const McEstimate e =
      mc_divergence_estimate(FiniteSampler(plus), FiniteSampler(minus), 2.0, 1000000, 42);
  EXPECT_FALSE(e.support_violation);
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_LE(std::abs(e.estimate - exact), 3.0 * e.std_error);
}

TEST(MonteCarlo, BitIdenticalForFixedSeed) {
  const auto [plus, minus] = randomized_response(1.0);
  const McEstimate a = mc_divergence_estimate(FiniteSampler(plus), FiniteSampler(minus), 3.0, 20000, 9);
  const McEstimate b = mc_divergence_estimate(FiniteSampler(plus), FiniteSampler(minus), 3.0, 20000, 9);
  EXPECT_EQ(std::memcmp(&a.estimate, &b.estimate, sizeof(double)), 0);
  EXPECT_EQ(std::memcmp(&a.std_error, &b.std_error, sizeof(double)), 0);
  const McEstimate c = mc_divergence_estimate(FiniteSampler(plus), FiniteSampler(minus), 3.0, 20000, 10);
  EXPECT_NE(a.estimate, c.estimate);
}

TEST(MonteCarlo, SupportViolationIsFlagged) {
  const McEstimate e = mc_divergence_estimate(FiniteSampler(bit(0.5)), FiniteSampler(bit(1.0)),
                                              2.0, 10000, 3);
  EXPECT_TRUE(e.support_violation);
  EXPECT_TRUE(std::isinf(e.estimate));
}

TEST(MonteCarlo, Preconditions) {
  EXPECT_THROW(mc_divergence_estimate(FiniteSampler(bit(0.5)), FiniteSampler(bit(0.5)), 2.0, 100, 0),
               DomainError);
  EXPECT_THROW(mc_divergence_estimate(FiniteSampler(bit(0.5)), FiniteSampler(bit(0.5)), 1.0, 10000, 0),
               InvalidOrder);
}

}  // namespace
}  // namespace cdp
