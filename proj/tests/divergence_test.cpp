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
#include <numbers>

#include "cdp/divergence.hpp"
#include "cdp/rng.hpp"

namespace cdp {
namespace {

OutcomeDist bit(double p0) {
  return OutcomeDist({"0", "1"}, Eigen::Vector2d(p0, 1.0 - p0));
}

TEST(RenyiOrder, RejectsOrdersBelowOne) {
  EXPECT_THROW(RenyiOrder(0.5), InvalidOrder);
  EXPECT_THROW(RenyiOrder(std::nan("")), InvalidOrder);
  EXPECT_TRUE(RenyiOrder::kl().is_kl());
  EXPECT_TRUE(RenyiOrder::max().is_max());
}

TEST(OutcomeDist, ValidatesMass) {
  EXPECT_THROW(OutcomeDist({"a", "b"}, Eigen::Vector2d(0.5, 0.6)), DomainError);
  EXPECT_THROW(OutcomeDist({"a", "b"}, Eigen::Vector2d(1.5, -0.5)), DomainError);
  EXPECT_THROW(OutcomeDist({"a", "a"}, Eigen::Vector2d(0.5, 0.5)), DomainError);
  EXPECT_NO_THROW(OutcomeDist({"a", "b"}, Eigen::Vector2d(0.5, 0.5 + 1e-10)));
}

TEST(RenyiDivergence, IdenticalIsZero) {
  for (const double a : {1.0, 1.5, 2.0, 10.0, kInfinity}) {
    EXPECT_NEAR(renyi_divergence(bit(0.5), bit(0.5), RenyiOrder(a)), 0.0, 1e-15);
  }
}

TEST(RenyiDivergence, PointMassAgainstUniform) {
  EXPECT_NEAR(renyi_divergence(bit(1.0), bit(0.5), RenyiOrder(2.0)), std::numbers::ln2, 1e-15);
}

TEST(RenyiDivergence, KlOfSkewedBits) {
  EXPECT_NEAR(renyi_divergence(bit(0.75), bit(0.25), RenyiOrder::kl()),
              0.549306144334055, 1e-14);
}

TEST(RenyiDivergence, AbsoluteContinuityFailureIsInfinite) {
  for (const double a : {1.0, 2.0, kInfinity}) {
    EXPECT_TRUE(std::isinf(renyi_divergence(bit(0.5), bit(1.0), RenyiOrder(a))));
  }
}

TEST(RenyiDivergence, MaxOrderIsLargestLogRatio) {
  EXPECT_NEAR(renyi_divergence(bit(0.75), bit(0.25), RenyiOrder::max()), std::log(3.0), 1e-15);
}

TEST(RenyiDivergence, OrderNearOneApproachesKl) {
  const double kl = renyi_divergence(bit(0.75), bit(0.25), RenyiOrder::kl());
  EXPECT_NEAR(renyi_divergence(bit(0.75), bit(0.25), RenyiOrder(1.0 + 1e-7)), kl, 1e-6);
}

TEST(PrivacyLossDist, SkewedBits) {
  const PrivacyLossDist z = privacy_loss_dist(bit(0.75), bit(0.25));
  ASSERT_EQ(z.size(), 2u);
  EXPECT_NEAR(z.losses()[0], -std::log(3.0), 1e-15);
  EXPECT_NEAR(z.probs()[0], 0.25, 1e-15);
  EXPECT_NEAR(z.losses()[1], std::log(3.0), 1e-15);
  EXPECT_NEAR(z.probs()[1], 0.75, 1e-15);
}

TEST(PrivacyLossDist, IdenticalPairIsPointMassAtZero) {
  const PrivacyLossDist z = privacy_loss_dist(bit(0.3), bit(0.3));
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z.losses()[0], 0.0);
  EXPECT_NEAR(z.probs()[0], 1.0, 1e-15);
}

TEST(PrivacyLossDist, PointMassAgainstUniform) {
  const PrivacyLossDist z = privacy_loss_dist(bit(1.0), bit(0.5));
  ASSERT_EQ(z.size(), 1u);
  EXPECT_NEAR(z.losses()[0], std::numbers::ln2, 1e-15);
  EXPECT_EQ(z.probs()[0], 1.0);
}

TEST(PrivacyLossDist, InfiniteLossCarriesMass) {
  const PrivacyLossDist z = privacy_loss_dist(bit(0.5), bit(1.0));
  EXPECT_EQ(z.infinity_mass(), 0.5);
  EXPECT_EQ(z.tail_mass(1e300), 0.5);
}

TEST(DivergenceFromLoss, MatchesDirectComputation) {
  const PrivacyLossDist z = privacy_loss_dist(bit(0.75), bit(0.25));
  EXPECT_NEAR(divergence_from_loss(z, RenyiOrder::kl()), 0.5 * std::log(3.0), 1e-14);
  EXPECT_NEAR(divergence_from_loss(z, RenyiOrder(2.0)), std::log(7.0 / 3.0), 1e-14);
  const PrivacyLossDist zero({0.0}, {1.0});
  EXPECT_EQ(divergence_from_loss(zero, RenyiOrder(2.0)), 0.0);
}

TEST(Pushforward, CollapsesOutcomes) {
  const OutcomeDist p({"a", "b", "c"}, Eigen::Vector3d(0.25, 0.25, 0.5));
  const OutcomeDist img = pushforward(p, [](const Label& l) { return l == "c" ? Label("y") : Label("x"); });
  ASSERT_EQ(img.size(), 2u);
  EXPECT_DOUBLE_EQ(img.prob("x"), 0.5);
  EXPECT_DOUBLE_EQ(img.prob("y"), 0.5);
  const OutcomeDist id = pushforward(p, [](const Label& l) { return l; });
  EXPECT_EQ(id.outcomes(), p.outcomes());
  EXPECT_EQ(pushforward(p, [](const Label&) { return Label("k"); }).prob("k"), 1.0);
}

TEST(Product, UniformBits) {
  const OutcomeDist u = OutcomeDist::uniform({"0", "1"});
  const OutcomeDist pp = product(u, u);
  ASSERT_EQ(pp.size(), 4u);
  for (const auto& l : pp.outcomes()) EXPECT_DOUBLE_EQ(pp.prob(l), 0.25);
  EXPECT_DOUBLE_EQ(pp.prob("0,1"), 0.25);
  const OutcomeDist relabeled = product(OutcomeDist::point_mass("x"), bit(0.3));
  EXPECT_DOUBLE_EQ(relabeled.prob("x,0"), 0.3);
}

TEST(Mixture, Endpoints) {
  const OutcomeDist m = mixture(bit(1.0), bit(0.0), 0.5);
  EXPECT_DOUBLE_EQ(m.prob("0"), 0.5);
  EXPECT_DOUBLE_EQ(mixture(bit(0.2), bit(0.9), 0.0).prob("0"), 0.2);
  EXPECT_DOUBLE_EQ(mixture(bit(0.2), bit(0.9), 1.0).prob("0"), 0.9);
}

TEST(LossTailBound, Examples) {
  EXPECT_NEAR(loss_tail_bound(0.0, 0.5, 1.0), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(loss_tail_bound(0.0, 0.5, 1e-9), 1.0, 1e-12);
}

TEST(TotalVariation, SkewedBits) {
  EXPECT_DOUBLE_EQ(total_variation(bit(0.75), bit(0.25)), 0.5);
}

// Randomized properties over small alphabets.
class RenyiProperties : public ::testing::Test {
 protected:
  rng::Engine gen{12345};
  const std::vector<double> orders = {1.0, 1.01, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0, kInfinity};
};

TEST_F(RenyiProperties, NonNegativeAndMonotone) {
  for (int i = 0; i < 500; ++i) {
    const int k = rng::uniform_int(gen, 2, 6);
    const OutcomeDist p = rng::random_dist(gen, k, 0.2);
    const OutcomeDist q = rng::random_dist(gen, k);
    double prev = 0.0;
    for (const double a : orders) {
      const double d = renyi_divergence(p, q, RenyiOrder(a));
      ASSERT_GE(d, 0.0);
      ASSERT_LE(prev, d + 1e-10) << "alpha=" << a;
      prev = d;
    }
  }
}

TEST_F(RenyiProperties, ProductAdditivity) {
  for (int i = 0; i < 300; ++i) {
    const OutcomeDist p1 = rng::random_dist(gen, 3);
    const OutcomeDist q1 = rng::random_dist(gen, 3);
    const OutcomeDist p2 = rng::random_dist(gen, 4);
    const OutcomeDist q2 = rng::random_dist(gen, 4);
    for (const double a : orders) {
      const RenyiOrder o(a);
      ASSERT_NEAR(renyi_divergence(product(p1, p2), product(q1, q2), o),
                  renyi_divergence(p1, q1, o) + renyi_divergence(p2, q2, o), 1e-9);
    }
  }
}

TEST_F(RenyiProperties, DataProcessing) {
  for (int i = 0; i < 300; ++i) {
    const OutcomeDist p = rng::random_dist(gen, 5, 0.2);
    const OutcomeDist q = rng::random_dist(gen, 5);
    const auto f = [](const Label& l) { return l < "o2" ? Label("lo") : Label("hi"); };
    for (const double a : orders) {
      const RenyiOrder o(a);
      ASSERT_LE(renyi_divergence(pushforward(p, f), pushforward(q, f), o),
                renyi_divergence(p, q, o) + 1e-9);
    }
  }
}

TEST_F(RenyiProperties, LossIdentityMatchesDirect) {
  for (int i = 0; i < 300; ++i) {
    const OutcomeDist p = rng::random_dist(gen, 4, 0.2);
    const OutcomeDist q = rng::random_dist(gen, 4);
    const PrivacyLossDist z = privacy_loss_dist(p, q);
    for (const double a : orders) {
      const RenyiOrder o(a);
      ASSERT_NEAR(divergence_from_loss(z, o), renyi_divergence(p, q, o), 1e-9);
    }
  }
}

}  // namespace
}  // namespace cdp
