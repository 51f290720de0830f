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

#include "cdp/divergence.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace cdp {
namespace {

double round_significant(double x, int digits) {
  if (x == 0.0 || std::isinf(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, x);
  return std::strtod(buf, nullptr);
}

}  // namespace

OutcomeDist::OutcomeDist(std::vector<Label> outcomes, Eigen::VectorXd probs)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
  if (static_cast<Eigen::Index>(outcomes_.size()) != probs_.size()) {
    throw DomainError("OutcomeDist: outcomes and probs differ in length");
  }
  if (outcomes_.empty()) throw DomainError("OutcomeDist: empty outcome set");
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (!(probs_(i) >= 0.0) || std::isinf(probs_(i))) {
      throw DomainError("OutcomeDist: probability for '" + outcomes_[i] +
                        "' is not a finite nonnegative number");
    }
  }
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw DomainError("OutcomeDist: probabilities sum to " +
                      std::to_string(total));
  }
  std::unordered_set<Label> seen;
  for (const auto& label : outcomes_) {
    if (!seen.insert(label).second) {
      throw DomainError("OutcomeDist: duplicate outcome '" + label + "'");
    }
  }
}

OutcomeDist OutcomeDist::point_mass(Label outcome) {
  return OutcomeDist({std::move(outcome)}, Eigen::VectorXd::Ones(1));
}

OutcomeDist OutcomeDist::uniform(std::vector<Label> outcomes) {
  const auto n = static_cast<Eigen::Index>(outcomes.size());
  if (n == 0) throw DomainError("OutcomeDist: empty outcome set");
  return OutcomeDist(std::move(outcomes),
                     Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

std::optional<std::size_t> OutcomeDist::index_of(const Label& label) const {
  const auto it = std::find(outcomes_.begin(), outcomes_.end(), label);
  if (it == outcomes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - outcomes_.begin());
}

double OutcomeDist::prob(const Label& label) const {
  const auto idx = index_of(label);
  return idx ? probs_(static_cast<Eigen::Index>(*idx)) : 0.0;
}

OutcomeDist OutcomeDist::aligned_to(const OutcomeDist& reference) const {
  if (reference.size() != size()) {
    throw DomainError("outcome sets differ in size");
  }
  std::unordered_map<Label, Eigen::Index> position;
  position.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    position.emplace(outcomes_[i], static_cast<Eigen::Index>(i));
  }
  Eigen::VectorXd reordered(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto it = position.find(reference.outcomes_[i]);
    if (it == position.end()) {
      throw DomainError("outcome '" + reference.outcomes_[i] +
                        "' missing from the other distribution");
    }
    reordered(static_cast<Eigen::Index>(i)) = probs_(it->second);
  }
  return OutcomeDist(reference.outcomes_, std::move(reordered));
}

PrivacyLossDist::PrivacyLossDist(std::vector<double> losses,
                                 std::vector<double> probs) {
  if (losses.size() != probs.size() || losses.empty()) {
    throw DomainError("PrivacyLossDist: losses and probs must be nonempty "
                      "and of equal length");
  }
  // Keyed by the loss rounded to 12 significant digits; the first exact
  // loss seen under a key is kept as its representative.
  std::map<double, std::pair<double, double>> merged;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (std::isnan(losses[i]) || losses[i] == -kInfinity) {
      throw DomainError("PrivacyLossDist: loss must be finite or +inf");
    }
    if (!(probs[i] >= 0.0)) {
      throw DomainError("PrivacyLossDist: negative probability");
    }
    const auto [it, inserted] = merged.try_emplace(
        round_significant(losses[i], 12), losses[i], 0.0);
    it->second.second += probs[i];
  }
  double total = 0.0;
  for (const auto& [key, entry] : merged) {
    const auto [loss, mass] = entry;
    if (mass == 0.0) continue;
    losses_.push_back(loss);
    probs_.push_back(mass);
    total += mass;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw DomainError("PrivacyLossDist: probabilities sum to " +
                      std::to_string(total));
  }
}

double PrivacyLossDist::infinity_mass() const {
  return !losses_.empty() && std::isinf(losses_.back()) ? probs_.back() : 0.0;
}

double PrivacyLossDist::tail_mass(double threshold) const {
  double tail = 0.0;
  for (std::size_t i = 0; i < losses_.size(); ++i) {
    if (losses_[i] > threshold) tail += probs_[i];
  }
  return tail;
}

ExtendedReal renyi_divergence(const OutcomeDist& p, const OutcomeDist& q,
                              RenyiOrder order) {
  const OutcomeDist q_aligned = q.aligned_to(p);
  return kernels::renyi_divergence(p.probs(), q_aligned.probs(), order);
}

double total_variation(const OutcomeDist& p, const OutcomeDist& q) {
  const OutcomeDist q_aligned = q.aligned_to(p);
  return 0.5 * (p.probs() - q_aligned.probs()).cwiseAbs().sum();
}

PrivacyLossDist privacy_loss_dist(const OutcomeDist& p, const OutcomeDist& q) {
  const OutcomeDist q_aligned = q.aligned_to(p);
  std::vector<double> losses;
  std::vector<double> probs;
  for (Eigen::Index i = 0; i < p.probs().size(); ++i) {
    const double pi = p.probs()(i);
    if (pi <= 0.0) continue;
    const double qi = q_aligned.probs()(i);
    const double loss =
        qi > 0.0 ? std::log(pi) - std::log(qi)
                 : kInfinity;
    losses.push_back(loss);
    probs.push_back(pi);
  }
  return PrivacyLossDist(std::move(losses), std::move(probs));
}

ExtendedReal divergence_from_loss(const PrivacyLossDist& z, RenyiOrder order) {
  const auto& losses = z.losses();
  const auto& probs = z.probs();
  if (z.infinity_mass() > 0.0) return kInfinity;

  if (order.is_max()) return std::max(losses.back(), 0.0);

  if (order.is_kl()) {
    double mean = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) mean += probs[i] * losses[i];
    return std::max(mean, 0.0);
  }

  const double alpha = order.value();
  Eigen::VectorXd terms(static_cast<Eigen::Index>(losses.size()));
  for (std::size_t i = 0; i < losses.size(); ++i) {
    terms(static_cast<Eigen::Index>(i)) =
        std::log(probs[i]) + (alpha - 1.0) * losses[i];
  }
  return std::max(kernels::log_sum_exp(terms) / (alpha - 1.0), 0.0);
}

OutcomeDist pushforward(const OutcomeDist& p,
                        const std::function<Label(const Label&)>& map) {
  std::vector<Label> labels;
  std::vector<double> masses;
  std::unordered_map<Label, std::size_t> slot;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Label image = map(p.outcomes()[i]);
    auto [it, inserted] = slot.emplace(image, labels.size());
    if (inserted) {
      labels.push_back(std::move(image));
      masses.push_back(0.0);
    }
    masses[it->second] += p.probs()(static_cast<Eigen::Index>(i));
  }
  return OutcomeDist(std::move(labels),
                     Eigen::Map<const Eigen::VectorXd>(
                         masses.data(), static_cast<Eigen::Index>(masses.size())));
}

OutcomeDist product(const OutcomeDist& p1, const OutcomeDist& p2) {
  std::vector<Label> labels;
  labels.reserve(p1.size() * p2.size());
  for (const auto& a : p1.outcomes()) {
    for (const auto& b : p2.outcomes()) labels.push_back(a + "," + b);
  }
  // Row-major flattening of the outer product matches the label order.
  const Eigen::MatrixXd outer = p2.probs() * p1.probs().transpose();
  return OutcomeDist(std::move(labels),
                     Eigen::Map<const Eigen::VectorXd>(outer.data(), outer.size()));
}

OutcomeDist mixture(const OutcomeDist& p0, const OutcomeDist& p1, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("mixture: weight must lie in [0, 1]");
  }
  const OutcomeDist p1_aligned = p1.aligned_to(p0);
  return OutcomeDist(p0.outcomes(),
                     t * p1_aligned.probs() + (1.0 - t) * p0.probs());
}

double loss_tail_bound(double xi, double rho, double lambda) {
  if (xi < 0.0 || rho < 0.0 || !(lambda > 0.0)) {
    throw DomainError("loss_tail_bound: need xi >= 0, rho >= 0, lambda > 0");
  }
  if (rho == 0.0) return 0.0;
  return std::exp(-lambda * lambda / (4.0 * rho));
}

}  // namespace cdp
