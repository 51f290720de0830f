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

// Information-theoretic limits at desk scale: exact mutual information of
// finite channels and its zCDP upper bounds, greedy packings/nets, the
// packing lower bound, and the zCDP -> pure DP purification construction
// (exponential mechanism over a net of achievable query answers).

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdp/accountant.hpp"
#include "cdp/divergence.hpp"

namespace cdp {

/// A channel between finite sets: one output distribution per input, all
/// over the same outcome set (stored in the order of the first input).
class FiniteChannel {
 public:
  FiniteChannel(std::vector<Label> inputs, std::vector<OutcomeDist> conditionals);

  const std::vector<Label>& inputs() const { return inputs_; }
  const std::vector<Label>& outputs() const { return conditionals_.front().outcomes(); }
  const OutcomeDist& conditional(std::size_t input) const {
    return conditionals_.at(input);
  }
  const OutcomeDist& conditional(const Label& input) const;
  std::size_t num_inputs() const { return inputs_.size(); }

  /// Row i is the output distribution for input i.
  Eigen::MatrixXd transition_matrix() const;

 private:
  std::vector<Label> inputs_;
  std::vector<OutcomeDist> conditionals_;
};

using Adjacency = std::function<bool(const Label&, const Label&)>;

/// Equal-length labels differing in exactly one position.
bool hamming_adjacent(const Label& a, const Label& b);

/// {1, 1.01, 1.1, 1.5, 2, 3, 5, 10, 100, inf}.
std::span<const double> default_order_grid();

struct Certification {
  bool certified = true;
  /// Largest D_alpha - (xi + rho alpha) seen over all adjacent pairs.
  double worst_excess = -kInfinity;
  Label worst_from;
  Label worst_to;
  double worst_order = 0.0;
};

/// Checks D_alpha(M(x) || M(x')) <= xi + rho alpha + tolerance for every
/// ordered adjacent pair and every order in `orders`. Order 1 is compared
/// against xi + rho; order inf is only constraining when rho = 0.
Certification certify_zcdp(const FiniteChannel& channel,
                           const ZcdpParams& params,
                           const Adjacency& adjacent = hamming_adjacent,
                           std::span<const double> orders = default_order_grid(),
                           double tolerance = 1e-12);

/// Exact I(X; M(X)) in nats, computed as E_x[D_1(M(x) || M(X))]. The prior
/// must be a distribution over the channel's inputs.
double mutual_information(const OutcomeDist& prior, const FiniteChannel& channel);

/// Dependence structure of the input for mi_bound.
struct MiStructure {
  enum class Kind { kGeneral, kIndependent, kBlocks };
  Kind kind = Kind::kGeneral;
  int blocks = 0;      // m
  int block_size = 0;  // l

  static MiStructure general() { return {Kind::kGeneral, 0, 0}; }
  static MiStructure independent() { return {Kind::kIndependent, 0, 0}; }
  static MiStructure blocks_of(int m, int l) { return {Kind::kBlocks, m, l}; }
};

/// Upper bound on I(X; M(X)) for a (xi, rho)-zCDP mechanism on n entries:
///   general      xi n (1 + log n) + rho n^2
///   independent  (xi + rho) n
///   blocks(m,l)  m (xi l (1 + log l) + rho l^2), requires n = m l.
double mi_bound(const ZcdpParams& params, int n, const MiStructure& structure);

/// n independent uses of randomized response on bits; inputs and outputs
/// are bit strings such as "0110".
FiniteChannel randomized_response_channel(double eps, int n);

/// Uniform over {0,1}^n (independent entries).
OutcomeDist independent_uniform_prior(int n);
/// Uniform over the two constant strings 0...0 and 1...1, on the full
/// {0,1}^n outcome set.
OutcomeDist correlated_prior(int n);
/// m independent blocks of l identical bits.
OutcomeDist block_prior(int m, int l);

/// Finite point set with a symmetric, nonnegative, zero-diagonal distance.
class MetricPointSet {
 public:
  MetricPointSet(std::vector<Label> points, Eigen::MatrixXd distances);

  /// Points on the real line with d(a, b) = |a - b|.
  static MetricPointSet on_line(std::span<const double> coordinates);

  const std::vector<Label>& points() const { return points_; }
  const Eigen::MatrixXd& distances() const { return distances_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Label> points_;
  Eigen::MatrixXd distances_;
};

/// Pairwise distances within `chosen` all exceed alpha.
template <typename Distance>
bool is_packing(std::span<const std::size_t> chosen, Distance&& distance,
                double alpha) {
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    for (std::size_t j = i + 1; j < chosen.size(); ++j) {
      if (!(distance(chosen[i], chosen[j]) > alpha)) return false;
    }
  }
  return true;
}

/// Every one of the `count` points lies within alpha of `chosen`.
template <typename Distance>
bool is_net(std::size_t count, std::span<const std::size_t> chosen,
            Distance&& distance, double alpha) {
  for (std::size_t y = 0; y < count; ++y) {
    bool covered = false;
    for (const std::size_t t : chosen) {
      if (distance(y, t) <= alpha) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

/// Greedy packing/net over points 0..count-1: repeatedly take the first
/// remaining point and discard every remaining point within alpha of it.
/// Throws InstanceTooLarge once more than `max_size` points are chosen. The
/// result is checked against both defining properties before returning.
template <typename Distance>
std::vector<std::size_t> greedy_packing_net_indices(std::size_t count,
                                                    Distance&& distance,
                                                    double alpha,
                                                    std::size_t max_size = static_cast<std::size_t>(-1)) {
  if (!(alpha > 0.0)) throw DomainError("greedy_packing_net: alpha must be > 0");
  std::vector<std::size_t> remaining(count);
  for (std::size_t i = 0; i < count; ++i) remaining[i] = i;
  std::vector<std::size_t> chosen;
  while (!remaining.empty()) {
    const std::size_t center = remaining.front();
    chosen.push_back(center);
    if (chosen.size() > max_size) {
      throw InstanceTooLarge("greedy_packing_net: net exceeds " +
                             std::to_string(max_size) + " points");
    }
    std::vector<std::size_t> kept;
    for (const std::size_t y : remaining) {
      if (distance(y, center) > alpha) kept.push_back(y);
    }
    remaining = std::move(kept);
  }
  if (!is_packing(std::span<const std::size_t>(chosen), distance, alpha) ||
      !is_net(count, std::span<const std::size_t>(chosen), distance, alpha)) {
    throw std::logic_error("greedy_packing_net: result failed self-check");
  }
  return chosen;
}

std::vector<Label> greedy_packing_net(const MetricPointSet& space, double alpha);

struct PackingBound {
  double lhs = 0.0;         // (1 - beta) log|T| - log 2
  double rhs = 0.0;         // xi n (1 + log n) + rho n^2
  bool consistent = true;   // lhs <= rhs
  double min_n_pure = 0.0;  // sqrt(lhs / rho), the xi = 0 rearrangement
};

/// A (xi, rho)-zCDP mechanism that is beta-accurate on a packing of size
/// |T| needs lhs <= rhs. min_n_pure is 0 when lhs <= 0 and +inf when rho = 0
/// and lhs > 0.
PackingBound packing_lower_bound(int t_size, double beta,
                                 const ZcdpParams& params, int n);

enum class QueryNorm { kLinf, kL1Mean };

double query_norm(const Eigen::Ref<const Eigen::VectorXd>& v, QueryNorm norm);

/// Dataset histogram: counts per universe atom.
using Histogram = std::vector<int>;

/// All histograms with `total` entries over `atoms` atoms, in lexicographic
/// order. Throws InstanceTooLarge when there are more than `max_count`.
std::vector<Histogram> enumerate_histograms(int atoms, int total,
                                            std::size_t max_count);

struct PurifyOptions {
  std::size_t max_net_size = 100000;
  std::size_t max_datasets = 1000000;
  /// Dataset size whose achievable query means form the net; 0 uses n'.
  int net_sample_size = 0;
};

/// Pure-DP mechanism on datasets of size n' that runs the exponential
/// mechanism over a net T of achievable mean-query vectors with loss
/// l(x, y) = ||y - q(x)||.
class PurifiedMechanism {
 public:
  PurifiedMechanism(Eigen::MatrixXd atom_queries, Eigen::MatrixXd net,
                    int n_prime, double eps, QueryNorm norm,
                    std::size_t max_datasets);

  /// k x |T|; column j is a net point.
  const Eigen::MatrixXd& net() const { return net_; }
  std::size_t net_size() const { return static_cast<std::size_t>(net_.cols()); }
  int n_prime() const { return n_prime_; }
  double epsilon() const { return eps_; }
  /// 2/n' times the largest single-atom query norm.
  double sensitivity() const { return sensitivity_; }

  Eigen::VectorXd query_mean(const Histogram& dataset) const;
  /// Loss of every net point for this dataset.
  Eigen::VectorXd losses(const Histogram& dataset) const;
  OutcomeDist output_distribution(const Histogram& dataset) const;
  double expected_error(const Histogram& dataset) const;
  /// Pr[error > threshold].
  double error_tail(const Histogram& dataset, double threshold) const;
  double min_net_distance(const Histogram& dataset) const;

  std::vector<Histogram> datasets() const;
  /// Largest max-divergence between outputs on neighboring datasets (one
  /// entry changed), taken over every dataset of size n'.
  double max_neighbor_divergence() const;

 private:
  Eigen::MatrixXd atom_queries_;
  Eigen::MatrixXd net_;
  int n_prime_;
  double eps_;
  QueryNorm norm_;
  std::size_t max_datasets_;
  double sensitivity_;
};

/// atom_queries is k x |X| with entries in [0, 1]. The net has spacing 4
/// alpha over the mean vectors of all datasets of options.net_sample_size.
PurifiedMechanism purify(const Eigen::MatrixXd& atom_queries, int n_prime,
                         double eps, double alpha, QueryNorm norm,
                         const PurifyOptions& options = {});

}  // namespace cdp
