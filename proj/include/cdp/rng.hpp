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

// Portable random helpers. std::uniform_real_distribution and friends are
// implementation-defined, so everything is built from raw mt19937_64 words.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cdp/divergence.hpp"

namespace cdp::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

/// Integer in [lo, hi]; the modulo bias is irrelevant at test scale.
inline int uniform_int(Engine& gen, int lo, int hi) {
  return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Standard normal by Box-Muller (cosine branch only).
inline double normal(Engine& gen) {
  const double u1 = 1.0 - uniform01(gen);  // (0, 1]
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Labels "o0", "o1", ...
inline std::vector<Label> numbered_labels(int k) {
  std::vector<Label> out;
  for (int i = 0; i < k; ++i) out.push_back("o" + std::to_string(i));
  return out;
}

/// Random probability vector of length k. Each coordinate is zeroed with
/// probability zero_prob, keeping at least one positive entry.
inline Eigen::VectorXd random_probs(Engine& gen, int k, double zero_prob = 0.0) {
  Eigen::VectorXd w(k);
  for (int i = 0; i < k; ++i) {
    w(i) = uniform01(gen) < zero_prob ? 0.0 : -std::log(1.0 - uniform01(gen));
  }
  if (!(w.sum() > 0.0)) w(uniform_int(gen, 0, k - 1)) = 1.0;
  return w / w.sum();
}

inline OutcomeDist random_dist(Engine& gen, int k, double zero_prob = 0.0) {
  return OutcomeDist(numbered_labels(k), random_probs(gen, k, zero_prob));
}

}  // namespace cdp::rng
