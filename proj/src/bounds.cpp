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

#include "cdp/bounds.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "cdp/mechanisms.hpp"

namespace cdp {
namespace {

// Cap on cached output probabilities when checking neighbor divergences.
constexpr std::size_t kMaxCachedProbabilities = 50'000'000;

Label bit_string(unsigned value, int n) {
  Label s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if ((value >> (n - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

void require_bit_width(int n, const char* op) {
  if (n < 1 || n > 20) {
    throw DomainError(std::string(op) + ": bit width must lie in [1, 20]");
  }
}

std::vector<Label> all_bit_strings(int n) {
  std::vector<Label> labels;
  labels.reserve(std::size_t{1} << n);
  for (unsigned x = 0; x < (1U << n); ++x) labels.push_back(bit_string(x, n));
  return labels;
}

void enumerate_into(int atom, int remaining, Histogram& current,
                    std::vector<Histogram>& out) {
  const int atoms = static_cast<int>(current.size());
  if (atom == atoms - 1) {
    current[static_cast<std::size_t>(atom)] = remaining;
    out.push_back(current);
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    current[static_cast<std::size_t>(atom)] = c;
    enumerate_into(atom + 1, remaining - c, current, out);
  }
}

}  // namespace

FiniteChannel::FiniteChannel(std::vector<Label> inputs,
                             std::vector<OutcomeDist> conditionals)
    : inputs_(std::move(inputs)) {
  if (inputs_.empty() || inputs_.size() != conditionals.size()) {
    throw DomainError("FiniteChannel: need one conditional per input");
  }
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (inputs_[i] == inputs_[j]) {
        throw DomainError("FiniteChannel: duplicate input '" + inputs_[i] + "'");
      }
    }
  }
  conditionals_.reserve(conditionals.size());
  conditionals_.push_back(std::move(conditionals.front()));
  for (std::size_t i = 1; i < conditionals.size(); ++i) {
    conditionals_.push_back(conditionals[i].aligned_to(conditionals_.front()));
  }
}

const OutcomeDist& FiniteChannel::conditional(const Label& input) const {
  const auto it = std::find(inputs_.begin(), inputs_.end(), input);
  if (it == inputs_.end()) {
    throw DomainError("FiniteChannel: unknown input '" + input + "'");
  }
  return conditionals_[static_cast<std::size_t>(it - inputs_.begin())];
}

Eigen::MatrixXd FiniteChannel::transition_matrix() const {
  const auto rows = static_cast<Eigen::Index>(inputs_.size());
  const auto cols = static_cast<Eigen::Index>(outputs().size());
  Eigen::MatrixXd w(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    w.row(i) = conditionals_[static_cast<std::size_t>(i)].probs().transpose();
  }
  return w;
}

bool hamming_adjacent(const Label& a, const Label& b) {
  if (a.size() != b.size()) return false;
  int differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i] && ++differing > 1) return false;
  }
  return differing == 1;
}

std::span<const double> default_order_grid() {
  static const std::array<double, 10> kGrid = {1.0, 1.01, 1.1, 1.5, 2.0,
                                               3.0, 5.0,  10.0, 100.0, kInfinity};
  return kGrid;
}

Certification certify_zcdp(const FiniteChannel& channel,
                           const ZcdpParams& params, const Adjacency& adjacent,
                           std::span<const double> orders, double tolerance) {
  const Eigen::MatrixXd w = channel.transition_matrix();
  const auto& inputs = channel.inputs();
  Certification result;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      if (i == j || !adjacent(inputs[i], inputs[j])) continue;
      const auto row_i = w.row(static_cast<Eigen::Index>(i)).transpose();
      const auto row_j = w.row(static_cast<Eigen::Index>(j)).transpose();
      for (const double alpha : orders) {
        const RenyiOrder order(alpha);
        double allowed;
        if (order.is_max()) {
          if (params.rho() > 0.0) continue;
          allowed = params.xi();
        } else {
          allowed = params.xi() + params.rho() * alpha;
        }
        const double d = kernels::renyi_divergence(row_i, row_j, order);
        const double excess = d - allowed;
        if (excess > result.worst_excess) {
          result.worst_excess = excess;
          result.worst_from = inputs[i];
          result.worst_to = inputs[j];
          result.worst_order = alpha;
        }
        if (excess > tolerance) result.certified = false;
      }
    }
  }
  return result;
}

double mutual_information(const OutcomeDist& prior,
                          const FiniteChannel& channel) {
  const auto& inputs = channel.inputs();
  if (prior.size() != inputs.size()) {
    throw DomainError("mutual_information: prior is not over the channel inputs");
  }
  Eigen::VectorXd pi(static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto idx = prior.index_of(inputs[i]);
    if (!idx) {
      throw DomainError("mutual_information: prior lacks input '" + inputs[i] + "'");
    }
    pi(static_cast<Eigen::Index>(i)) = prior.probs()(static_cast<Eigen::Index>(*idx));
  }
  const Eigen::MatrixXd w = channel.transition_matrix();
  const Eigen::VectorXd marginal = w.transpose() * pi;
  double info = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (pi(i) <= 0.0) continue;
    info += pi(i) * kernels::renyi_divergence(w.row(i).transpose(), marginal,
                                              RenyiOrder::kl());
  }
  return std::max(info, 0.0);
}

double mi_bound(const ZcdpParams& params, int n, const MiStructure& structure) {
  if (n < 1) throw DomainError("mi_bound: n must be positive");
  if (params.delta_approx() != 0.0) {
    throw Unsupported("mi_bound: approximate zCDP has no mutual information bound");
  }
  const auto group_kl = [&](int size) {
    const double s = static_cast<double>(size);
    return params.xi() * s * (1.0 + std::log(s)) + params.rho() * s * s;
  };
  switch (structure.kind) {
    case MiStructure::Kind::kGeneral:
      return group_kl(n);
    case MiStructure::Kind::kIndependent:
      return (params.xi() + params.rho()) * n;
    case MiStructure::Kind::kBlocks:
      if (structure.blocks < 1 || structure.block_size < 1 ||
          structure.blocks * structure.block_size != n) {
        throw DomainError("mi_bound: blocks(m, l) requires n = m * l");
      }
      return structure.blocks * group_kl(structure.block_size);
  }
  throw DomainError("mi_bound: unknown structure");
}

FiniteChannel randomized_response_channel(double eps, int n) {
  require_bit_width(n, "randomized_response_channel");
  if (n > 10) throw InstanceTooLarge("randomized_response_channel: n > 10");
  const auto [plus, minus] = randomized_response(eps);
  const double keep = plus.prob("+1");
  const double flip = plus.prob("-1");
  const std::vector<Label> labels = all_bit_strings(n);
  const unsigned size = 1U << n;
  std::vector<OutcomeDist> rows;
  rows.reserve(size);
  for (unsigned x = 0; x < size; ++x) {
    Eigen::VectorXd probs(size);
    for (unsigned y = 0; y < size; ++y) {
      const int flips = std::popcount(x ^ y);
      probs(y) = std::pow(keep, n - flips) * std::pow(flip, flips);
    }
    probs /= probs.sum();
    rows.emplace_back(labels, std::move(probs));
  }
  return FiniteChannel(labels, std::move(rows));
}

OutcomeDist independent_uniform_prior(int n) {
  require_bit_width(n, "independent_uniform_prior");
  return OutcomeDist::uniform(all_bit_strings(n));
}

OutcomeDist correlated_prior(int n) {
  return block_prior(1, n);
}

OutcomeDist block_prior(int m, int l) {
  if (m < 1 || l < 1) throw DomainError("block_prior: m and l must be >= 1");
  const int n = m * l;
  require_bit_width(n, "block_prior");
  const unsigned size = 1U << n;
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(size);
  const double mass = std::ldexp(1.0, -m);
  for (unsigned blocks = 0; blocks < (1U << m); ++blocks) {
    unsigned x = 0;
    for (int b = 0; b < m; ++b) {
      const bool bit = (blocks >> (m - 1 - b)) & 1U;
      for (int i = 0; i < l; ++i) x = (x << 1) | (bit ? 1U : 0U);
    }
    probs(x) = mass;
  }
  return OutcomeDist(all_bit_strings(n), std::move(probs));
}

MetricPointSet::MetricPointSet(std::vector<Label> points,
                               Eigen::MatrixXd distances)
    : points_(std::move(points)), distances_(std::move(distances)) {
  const auto n = static_cast<Eigen::Index>(points_.size());
  if (distances_.rows() != n || distances_.cols() != n) {
    throw DomainError("MetricPointSet: distance matrix must be n x n");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (distances_(i, i) != 0.0) {
      throw DomainError("MetricPointSet: nonzero self-distance");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = distances_(i, j);
      if (!(d >= 0.0) || std::isinf(d) || d != distances_(j, i)) {
        throw DomainError("MetricPointSet: distances must be finite, "
                          "nonnegative and symmetric");
      }
    }
  }
}

MetricPointSet MetricPointSet::on_line(std::span<const double> coordinates) {
  const auto n = static_cast<Eigen::Index>(coordinates.size());
  std::vector<Label> labels;
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", coordinates[static_cast<std::size_t>(i)]);
    labels.emplace_back(buf);
    for (Eigen::Index j = 0; j < n; ++j) {
      d(i, j) = std::abs(coordinates[static_cast<std::size_t>(i)] -
                         coordinates[static_cast<std::size_t>(j)]);
    }
  }
  return MetricPointSet(std::move(labels), std::move(d));
}

std::vector<Label> greedy_packing_net(const MetricPointSet& space,
                                      double alpha) {
  const auto& d = space.distances();
  const auto chosen = greedy_packing_net_indices(
      space.size(),
      [&d](std::size_t a, std::size_t b) {
        return d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      },
      alpha);
  std::vector<Label> labels;
  labels.reserve(chosen.size());
  for (const std::size_t i : chosen) labels.push_back(space.points()[i]);
  return labels;
}

PackingBound packing_lower_bound(int t_size, double beta,
                                 const ZcdpParams& params, int n) {
  if (t_size < 2) throw DomainError("packing_lower_bound: |T| must be >= 2");
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("packing_lower_bound: beta must lie in [0, 1]");
  }
  if (n < 1) throw DomainError("packing_lower_bound: n must be positive");
  if (params.delta_approx() != 0.0) {
    throw Unsupported("packing_lower_bound: requires plain zCDP");
  }
  PackingBound out;
  out.lhs = (1.0 - beta) * std::log(static_cast<double>(t_size)) - std::log(2.0);
  out.rhs = mi_bound(params, n, MiStructure::general());
  out.consistent = out.lhs <= out.rhs;
  if (out.lhs <= 0.0) {
    out.min_n_pure = 0.0;
  } else if (params.rho() == 0.0) {
    out.min_n_pure = kInfinity;
  } else {
    out.min_n_pure = std::sqrt(out.lhs / params.rho());
  }
  return out;
}

double query_norm(const Eigen::Ref<const Eigen::VectorXd>& v, QueryNorm norm) {
  switch (norm) {
    case QueryNorm::kLinf:
      return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    case QueryNorm::kL1Mean:
      return v.size() == 0 ? 0.0 : v.cwiseAbs().sum() / static_cast<double>(v.size());
  }
  return 0.0;
}

std::vector<Histogram> enumerate_histograms(int atoms, int total,
                                            std::size_t max_count) {
  if (atoms < 1 || total < 0) {
    throw DomainError("enumerate_histograms: need atoms >= 1 and total >= 0");
  }
  // C(total + atoms - 1, atoms - 1), checked against the cap as it grows.
  double count = 1.0;
  for (int i = 1; i < atoms; ++i) {
    count = count * static_cast<double>(total + i) / static_cast<double>(i);
    if (count > static_cast<double>(max_count) + 0.5) {
      throw InstanceTooLarge("enumerate_histograms: more than " +
                             std::to_string(max_count) + " datasets");
    }
  }
  std::vector<Histogram> out;
  out.reserve(static_cast<std::size_t>(std::llround(count)));
  Histogram current(static_cast<std::size_t>(atoms), 0);
  enumerate_into(0, total, current, out);
  return out;
}

PurifiedMechanism::PurifiedMechanism(Eigen::MatrixXd atom_queries,
                                     Eigen::MatrixXd net, int n_prime,
                                     double eps, QueryNorm norm,
                                     std::size_t max_datasets)
    : atom_queries_(std::move(atom_queries)),
      net_(std::move(net)),
      n_prime_(n_prime),
      eps_(eps),
      norm_(norm),
      max_datasets_(max_datasets) {
  if (net_.cols() == 0) throw DomainError("PurifiedMechanism: empty net");
  double max_norm = 0.0;
  for (Eigen::Index a = 0; a < atom_queries_.cols(); ++a) {
    max_norm = std::max(max_norm, query_norm(atom_queries_.col(a), norm_));
  }
  // With all-zero queries every loss is constant, and any positive scale
  // yields the same (uniform) mechanism.
  if (max_norm == 0.0) max_norm = 1.0;
  sensitivity_ = 2.0 / static_cast<double>(n_prime_) * max_norm;
}

Eigen::VectorXd PurifiedMechanism::query_mean(const Histogram& dataset) const {
  if (static_cast<Eigen::Index>(dataset.size()) != atom_queries_.cols()) {
    throw DomainError("PurifiedMechanism: histogram has wrong number of atoms");
  }
  Eigen::VectorXd counts(atom_queries_.cols());
  int total = 0;
  for (std::size_t a = 0; a < dataset.size(); ++a) {
    if (dataset[a] < 0) throw DomainError("PurifiedMechanism: negative count");
    counts(static_cast<Eigen::Index>(a)) = dataset[a];
    total += dataset[a];
  }
  if (total != n_prime_) {
    throw DomainError("PurifiedMechanism: dataset size must equal n'");
  }
  return atom_queries_ * counts / static_cast<double>(n_prime_);
}

Eigen::VectorXd PurifiedMechanism::losses(const Histogram& dataset) const {
  const Eigen::VectorXd mean = query_mean(dataset);
  Eigen::VectorXd out(net_.cols());
  for (Eigen::Index j = 0; j < net_.cols(); ++j) {
    out(j) = query_norm(net_.col(j) - mean, norm_);
  }
  return out;
}

OutcomeDist PurifiedMechanism::output_distribution(const Histogram& dataset) const {
  const Eigen::VectorXd l = losses(dataset);
  ExpMechSpec spec;
  spec.candidate_losses.assign(l.data(), l.data() + l.size());
  spec.delta_sensitivity = sensitivity_;
  spec.epsilon = eps_;
  return exponential_mechanism(spec);
}

double PurifiedMechanism::expected_error(const Histogram& dataset) const {
  return output_distribution(dataset).probs().dot(losses(dataset));
}

double PurifiedMechanism::error_tail(const Histogram& dataset,
                                     double threshold) const {
  const Eigen::VectorXd l = losses(dataset);
  const Eigen::VectorXd p = output_distribution(dataset).probs();
  double tail = 0.0;
  for (Eigen::Index j = 0; j < l.size(); ++j) {
    if (l(j) > threshold) tail += p(j);
  }
  return tail;
}

double PurifiedMechanism::min_net_distance(const Histogram& dataset) const {
  return losses(dataset).minCoeff();
}

std::vector<Histogram> PurifiedMechanism::datasets() const {
  return enumerate_histograms(static_cast<int>(atom_queries_.cols()), n_prime_,
                              max_datasets_);
}

double PurifiedMechanism::max_neighbor_divergence() const {
  const std::vector<Histogram> all = datasets();
  if (all.size() * net_size() > kMaxCachedProbabilities) {
    throw InstanceTooLarge("max_neighbor_divergence: too many output "
                           "probabilities to cache");
  }
  std::map<Histogram, std::size_t> index;
  Eigen::MatrixXd outputs(static_cast<Eigen::Index>(net_size()),
                          static_cast<Eigen::Index>(all.size()));
  for (std::size_t i = 0; i < all.size(); ++i) {
    index.emplace(all[i], i);
    outputs.col(static_cast<Eigen::Index>(i)) = output_distribution(all[i]).probs();
  }
  double worst = 0.0;
  const std::size_t atoms = static_cast<std::size_t>(atom_queries_.cols());
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t from = 0; from < atoms; ++from) {
      if (all[i][from] == 0) continue;
      for (std::size_t to = 0; to < atoms; ++to) {
        if (to == from) continue;
        Histogram neighbor = all[i];
        --neighbor[from];
        ++neighbor[to];
        const std::size_t j = index.at(neighbor);
        worst = std::max(worst, kernels::renyi_divergence(
                                    outputs.col(static_cast<Eigen::Index>(i)),
                                    outputs.col(static_cast<Eigen::Index>(j)),
                                    RenyiOrder::max()));
      }
    }
  }
  return worst;
}

PurifiedMechanism purify(const Eigen::MatrixXd& atom_queries, int n_prime,
                         double eps, double alpha, QueryNorm norm,
                         const PurifyOptions& options) {
  if (atom_queries.cols() < 1 || atom_queries.rows() < 1) {
    throw DomainError("purify: need at least one atom and one query");
  }
  if ((atom_queries.array() < 0.0).any() || (atom_queries.array() > 1.0).any() ||
      !atom_queries.allFinite()) {
    throw DomainError("purify: query values must lie in [0, 1]");
  }
  if (n_prime < 1) throw DomainError("purify: n' must be positive");
  if (!(eps > 0.0) || !(alpha > 0.0)) {
    throw DomainError("purify: eps and alpha must be positive");
  }
  const int net_n = options.net_sample_size > 0 ? options.net_sample_size : n_prime;

  const std::vector<Histogram> samples = enumerate_histograms(
      static_cast<int>(atom_queries.cols()), net_n, options.max_datasets);
  Eigen::MatrixXd means(atom_queries.rows(), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    Eigen::VectorXd counts(atom_queries.cols());
    for (std::size_t a = 0; a < samples[s].size(); ++a) {
      counts(static_cast<Eigen::Index>(a)) = samples[s][a];
    }
    means.col(static_cast<Eigen::Index>(s)) =
        atom_queries * counts / static_cast<double>(net_n);
  }

  const auto chosen = greedy_packing_net_indices(
      samples.size(),
      [&means, norm](std::size_t a, std::size_t b) {
        return query_norm(means.col(static_cast<Eigen::Index>(a)) -
                              means.col(static_cast<Eigen::Index>(b)),
                          norm);
      },
      4.0 * alpha, options.max_net_size);

  Eigen::MatrixXd net(atom_queries.rows(), static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t j = 0; j < chosen.size(); ++j) {
    net.col(static_cast<Eigen::Index>(j)) =
        means.col(static_cast<Eigen::Index>(chosen[j]));
  }
  return PurifiedMechanism(atom_queries, std::move(net), n_prime, eps, norm,
                           options.max_datasets);
}

}  // namespace cdp
