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

// Exact Renyi, KL and max divergences between finite distributions, privacy
// loss distributions, and the distribution combinators (product, mixture,
// pushforward) used to exercise the divergence calculus.
//
// All quantities are in nats. Divergences may be +infinity (absolute
// continuity failure) but are never NaN.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cdp/errors.hpp"

namespace cdp {

/// A real number or +infinity.
using ExtendedReal = double;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Normalization tolerance for probability vectors.
inline constexpr double kMassTolerance = 1e-9;

/// Renyi order alpha in [1, +inf]. Order 1 is the KL divergence and order
/// +inf is the max-divergence; both are evaluated by their own closed forms.
class RenyiOrder {
 public:
  explicit RenyiOrder(double alpha) : value_(alpha) {
    if (std::isnan(alpha) || alpha < 1.0) {
      throw InvalidOrder("Renyi order must lie in [1, inf], got " +
                         std::to_string(alpha));
    }
  }

  static RenyiOrder kl() { return RenyiOrder(1.0); }
  static RenyiOrder max() { return RenyiOrder(kInfinity); }

  double value() const { return value_; }
  bool is_kl() const { return value_ == 1.0; }
  bool is_max() const { return std::isinf(value_); }

 private:
  double value_;
};

namespace kernels {

/// log(sum(exp(v))) over the entries of v that are not -inf.
template <typename Derived>
double log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  const double m = v.maxCoeff();
  if (std::isinf(m)) return m;
  return m + std::log((v.derived().array() - m).exp().sum());
}

/// D_alpha(p || q) for aligned probability vectors. No validation beyond
/// matching sizes; callers are expected to pass normalized masses.
template <typename DerivedP, typename DerivedQ>
ExtendedReal renyi_divergence(const Eigen::MatrixBase<DerivedP>& p,
                              const Eigen::MatrixBase<DerivedQ>& q,
                              RenyiOrder order) {
  if (p.size() != q.size()) {
    throw DomainError("renyi_divergence: vectors have different sizes");
  }
  const Eigen::Index n = p.size();
  // Support of p. Any p > 0 with q == 0 breaks absolute continuity.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p(i) > 0.0 && q(i) <= 0.0) return kInfinity;
  }

  if (order.is_kl()) {
    double kl = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p(i) > 0.0) kl += p(i) * (std::log(p(i)) - std::log(q(i)));
    }
    return std::max(kl, 0.0);
  }

  if (order.is_max()) {
    double best = -kInfinity;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p(i) > 0.0) best = std::max(best, std::log(p(i)) - std::log(q(i)));
    }
    return std::max(best, 0.0);
  }

  const double alpha = order.value();
  Eigen::VectorXd terms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    terms(i) = p(i) > 0.0 ? alpha * std::log(p(i)) +
                                (1.0 - alpha) * std::log(q(i))
                          : -kInfinity;
  }
  return std::max(log_sum_exp(terms) / (alpha - 1.0), 0.0);
}

}  // namespace kernels

using Label = std::string;

/// Finite probability distribution over distinct labeled outcomes.
class OutcomeDist {
 public:
  /// Throws DomainError unless probabilities are nonnegative, sum to one
  /// within kMassTolerance, and labels are distinct. No renormalization.
  OutcomeDist(std::vector<Label> outcomes, Eigen::VectorXd probs);

  static OutcomeDist point_mass(Label outcome);
  static OutcomeDist uniform(std::vector<Label> outcomes);

  const std::vector<Label>& outcomes() const { return outcomes_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  std::size_t size() const { return outcomes_.size(); }

  std::optional<std::size_t> index_of(const Label& label) const;
  /// Mass of `label`, zero if the label is absent.
  double prob(const Label& label) const;

  /// Same distribution with outcomes reordered to match `reference`.
  /// Throws DomainError if the two outcome sets differ.
  OutcomeDist aligned_to(const OutcomeDist& reference) const;

 private:
  std::vector<Label> outcomes_;
  Eigen::VectorXd probs_;
};

/// Distribution of the privacy loss Z = log(p(Y)/q(Y)), Y ~ p. Entries are
/// sorted by loss and +inf marks mass where q = 0. Losses that agree to 12
/// significant digits are merged into one entry.
class PrivacyLossDist {
 public:
  PrivacyLossDist(std::vector<double> losses, std::vector<double> probs);

  const std::vector<double>& losses() const { return losses_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return losses_.size(); }

  double infinity_mass() const;
  /// Pr[Z > threshold].
  double tail_mass(double threshold) const;

 private:
  std::vector<double> losses_;
  std::vector<double> probs_;
};

/// D_alpha(p || q). Outcome sets must match up to ordering.
ExtendedReal renyi_divergence(const OutcomeDist& p, const OutcomeDist& q,
                              RenyiOrder order);

/// Total variation distance max_S |p(S) - q(S)|.
double total_variation(const OutcomeDist& p, const OutcomeDist& q);

/// Losses are rounded to 12 significant digits before equal losses are
/// merged, so the result is a canonical form of the pair.
PrivacyLossDist privacy_loss_dist(const OutcomeDist& p, const OutcomeDist& q);

/// (1/(alpha-1)) log E[exp((alpha-1) Z)], E[Z] at alpha = 1 and the largest
/// loss at alpha = inf.
ExtendedReal divergence_from_loss(const PrivacyLossDist& z, RenyiOrder order);

/// Image of `p` under `map`; masses landing on the same label are summed.
/// Output labels appear in order of first occurrence.
OutcomeDist pushforward(const OutcomeDist& p,
                        const std::function<Label(const Label&)>& map);

/// Independent product; the pair (a, b) is labeled "a,b".
OutcomeDist product(const OutcomeDist& p1, const OutcomeDist& p2);

/// t * p1 + (1 - t) * p0 over the outcome order of p0.
OutcomeDist mixture(const OutcomeDist& p0, const OutcomeDist& p1, double t);

/// exp(-lambda^2 / (4 rho)), the tail bound Pr[Z > lambda + xi + rho] for a
/// (xi, rho)-zCDP privacy loss. With rho = 0 the loss never exceeds xi and
/// the bound is 0.
double loss_tail_bound(double xi, double rho, double lambda);

}  // namespace cdp
