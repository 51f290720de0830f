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

#include "cdp/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cdp {
namespace {

constexpr double kEpsBisectionTolerance = 1e-10;

double clamp_probability(double delta) { return std::clamp(delta, 0.0, 1.0); }

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

void require_plain(const ZcdpParams& params, const char* op) {
  if (params.delta_approx() != 0.0) {
    throw DomainError(std::string(op) +
                      ": defined for plain zCDP only (delta_approx must be 0)");
  }
}

double l2_norm_of_eps(std::span<const DpPoint> points) {
  double sum_sq = 0.0;
  for (const auto& pt : points) sum_sq += pt.eps() * pt.eps();
  return std::sqrt(sum_sq);
}

}  // namespace

ZcdpParams::ZcdpParams(double xi, double rho, double delta_approx)
    : xi_(xi), rho_(rho), delta_approx_(delta_approx) {
  if (!(xi >= 0.0) || std::isinf(xi) || !(rho >= 0.0) || std::isinf(rho)) {
    throw DomainError("ZcdpParams: xi and rho must be finite and nonnegative");
  }
  if (!is_probability(delta_approx)) {
    throw DomainError("ZcdpParams: delta_approx must lie in [0, 1]");
  }
}

DpPoint::DpPoint(double eps, double delta) : eps_(eps), delta_(delta) {
  if (!(eps >= 0.0) || std::isinf(eps)) {
    throw DomainError("DpPoint: eps must be finite and nonnegative");
  }
  if (!is_probability(delta)) {
    throw DomainError("DpPoint: delta must lie in [0, 1]");
  }
}

McdpParams::McdpParams(double mu, double tau) : mu_(mu), tau_(tau) {
  // tau = 0 is admitted as the degenerate limit of a constant privacy loss.
  if (!std::isfinite(mu) || !(tau >= 0.0) || std::isinf(tau)) {
    throw DomainError("McdpParams: mu must be finite and tau nonnegative");
  }
}

ZcdpParams compose(std::span<const ZcdpParams> entries) {
  if (entries.empty()) throw DomainError("compose: empty sequence");
  double xi = 0.0;
  double rho = 0.0;
  double delta = 0.0;  // 1 - prod(1 - delta_i), accumulated pairwise
  for (const auto& e : entries) {
    xi += e.xi();
    rho += e.rho();
    delta += e.delta_approx() - delta * e.delta_approx();
  }
  return ZcdpParams(xi, rho, clamp_probability(delta));
}

ZcdpParams group_privacy(const ZcdpParams& params, int k) {
  if (k < 1) throw DomainError("group_privacy: group size must be >= 1");
  if (params.delta_approx() != 0.0) {
    throw Unsupported(
        "group_privacy: approximate zCDP has no group privacy guarantee");
  }
  double harmonic = 0.0;
  for (int i = k; i >= 1; --i) harmonic += 1.0 / i;
  const double kd = static_cast<double>(k);
  return ZcdpParams(params.xi() * kd * harmonic, params.rho() * kd * kd);
}

DpPoint zcdp_to_dp_simple(const ZcdpParams& params, double delta) {
  require_plain(params, "zcdp_to_dp_simple");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("zcdp_to_dp_simple: delta must lie in (0, 1)");
  }
  const double eps = params.xi() + params.rho() +
                     std::sqrt(4.0 * params.rho() * std::log(1.0 / delta));
  return DpPoint(eps, delta);
}

double zcdp_to_dp_simple_delta(const ZcdpParams& params, double eps) {
  require_plain(params, "zcdp_to_dp_simple_delta");
  const double excess = eps - params.xi() - params.rho();
  if (excess <= 0.0) return 1.0;
  if (params.rho() == 0.0) return 0.0;
  return clamp_probability(std::exp(-excess * excess / (4.0 * params.rho())));
}

std::array<double, 4> refined_branches(const ZcdpParams& params, double eps) {
  const double rho = params.rho();
  const double x = eps - params.xi() - rho;
  const double u = 1.0 + x / (2.0 * rho);
  return {1.0, std::sqrt(std::numbers::pi * rho), 1.0 / u,
          2.0 / (u + std::sqrt(u * u + 4.0 / (std::numbers::pi * rho)))};
}

double zcdp_to_dp_refined(const ZcdpParams& params, double eps) {
  require_plain(params, "zcdp_to_dp_refined");
  if (!(params.rho() > 0.0)) {
    throw DomainError("zcdp_to_dp_refined: rho must be positive");
  }
  if (!(eps >= params.xi() + params.rho())) {
    throw OutOfRange("zcdp_to_dp_refined: eps must be at least xi + rho");
  }
  const double x = eps - params.xi() - params.rho();
  const auto branches = refined_branches(params, eps);
  const double factor = *std::min_element(branches.begin(), branches.end());
  return clamp_probability(std::exp(-x * x / (4.0 * params.rho())) * factor);
}

double eps_for_delta(const ZcdpParams& params, double delta,
                     ConversionMethod method) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("eps_for_delta: delta must lie in (0, 1)");
  }
  const double da = params.delta_approx();
  if (delta < da) {
    throw OutOfRange("eps_for_delta: target delta below delta_approx");
  }
  if (params.rho() == 0.0) return params.xi();
  if (delta == da) {
    throw OutOfRange("eps_for_delta: target delta equals delta_approx; "
                     "no finite eps remains");
  }
  const ZcdpParams plain(params.xi(), params.rho());
  const double inner = (delta - da) / (1.0 - da);

  const double simple_eps = zcdp_to_dp_simple(plain, inner).eps();
  if (method == ConversionMethod::kSimple) return simple_eps;

  double lo = plain.xi() + plain.rho();
  if (zcdp_to_dp_refined(plain, lo) <= inner) return lo;
  // The refined bound never exceeds the simple one, so simple_eps brackets.
  double hi = simple_eps;
  while (hi - lo > kEpsBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (zcdp_to_dp_refined(plain, mid) <= inner) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::pair<ZcdpParams, ZcdpParams> pure_dp_to_zcdp(double eps) {
  if (!(eps >= 0.0) || std::isinf(eps)) {
    throw DomainError("pure_dp_to_zcdp: eps must be finite and nonnegative");
  }
  return {ZcdpParams(eps, 0.0), ZcdpParams(0.0, 0.5 * eps * eps)};
}

ZcdpParams dp_family_to_zcdp(double xi_hat, double rho_hat) {
  if (!is_probability(xi_hat) || !is_probability(rho_hat)) {
    throw DomainError("dp_family_to_zcdp: xi_hat and rho_hat must lie in [0, 1]");
  }
  return ZcdpParams(xi_hat - 0.25 * rho_hat + 5.0 * std::pow(rho_hat, 0.25),
                    0.25 * rho_hat);
}

ZcdpParams mcdp_to_zcdp(const McdpParams& params) {
  const double half_var = 0.5 * params.tau() * params.tau();
  double xi = params.mu() - half_var;
  if (xi < 0.0) {
    // Rounding at the Gaussian operating point mu = tau^2/2 is not an error.
    if (xi < -1e-12 * std::max(1.0, half_var)) {
      throw DomainError("mcdp_to_zcdp: mu < tau^2/2 would need negative xi");
    }
    xi = 0.0;
  }
  return ZcdpParams(xi, half_var);
}

McdpParams zcdp_to_mcdp(const ZcdpParams& params) {
  require_plain(params, "zcdp_to_mcdp");
  const double tau =
      std::sqrt(8.0 * std::expm1(params.xi() + 2.0 * params.rho()));
  return McdpParams(params.xi() + params.rho(), tau);
}

ApproxZcdpForms dp_to_approx_zcdp_forms(const DpPoint& pt) {
  return {ZcdpParams(pt.eps(), 0.0, pt.delta()),
          ZcdpParams(0.0, 0.5 * pt.eps() * pt.eps(), pt.delta())};
}

ZcdpParams dp_to_approx_zcdp(const DpPoint& pt) {
  return dp_to_approx_zcdp_forms(pt).quadratic_form;
}

DpPoint approx_zcdp_to_dp(const ZcdpParams& params, double eps) {
  const double da = params.delta_approx();
  if (params.rho() == 0.0) return DpPoint(params.xi(), da);
  const double inner =
      zcdp_to_dp_refined(ZcdpParams(params.xi(), params.rho()), eps);
  return DpPoint(eps, clamp_probability(da + (1.0 - da) * inner));
}

DpPoint dp_composition_bound(std::span<const DpPoint> points,
                             double delta_prime) {
  if (!(delta_prime > 0.0)) {
    throw DomainError("dp_composition_bound: delta_prime must be positive");
  }
  double delta_sum = delta_prime;
  for (const auto& pt : points) delta_sum += pt.delta();

  const double norm = l2_norm_of_eps(points);
  double eps = 0.5 * norm * norm;
  if (norm > 0.0) {
    const double log_arg =
        std::log(std::sqrt(std::numbers::pi / 2.0) * norm / delta_prime);
    if (log_arg > 0.0) eps += std::sqrt(2.0 * log_arg) * norm;
  }
  return DpPoint(eps, clamp_probability(delta_sum));
}

double dp_composition_refined_delta(std::span<const DpPoint> points,
                                    double eps) {
  const double norm = l2_norm_of_eps(points);
  double keep = 1.0;
  for (const auto& pt : points) keep *= 1.0 - pt.delta();
  const double rho = 0.5 * norm * norm;
  const double inner = rho > 0.0 ? zcdp_to_dp_refined(ZcdpParams(0.0, rho), eps)
                                 : 0.0;
  return clamp_probability(1.0 - (1.0 - inner) * keep);
}

double advanced_composition_eps(std::span<const DpPoint> points,
                                double delta_prime) {
  if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
    throw DomainError("advanced_composition_eps: delta_prime must lie in (0, 1)");
  }
  double sum_sq = 0.0;
  double linear = 0.0;
  for (const auto& pt : points) {
    sum_sq += pt.eps() * pt.eps();
    linear += pt.eps() * std::expm1(pt.eps());
  }
  return std::sqrt(2.0 * std::log(1.0 / delta_prime) * sum_sq) + linear;
}

const char* to_string(LedgerKind kind) {
  switch (kind) {
    case LedgerKind::kGaussian:
      return "gaussian";
    case LedgerKind::kPureDp:
      return "pure_dp";
    case LedgerKind::kApproxDp:
      return "approx_dp";
    case LedgerKind::kZcdp:
      return "zcdp";
    case LedgerKind::kMcdp:
      return "mcdp";
  }
  return "unknown";
}

ZcdpParams to_zcdp(const LedgerEntry& entry) {
  struct Visitor {
    ZcdpParams operator()(const GaussianEntry& e) const {
      return ZcdpParams(0.0, gaussian_rho(GaussianMech(e.sensitivity, e.sigma)));
    }
    ZcdpParams operator()(const PureDpEntry& e) const {
      return pure_dp_to_zcdp(e.eps).second;
    }
    ZcdpParams operator()(const ApproxDpEntry& e) const {
      return dp_to_approx_zcdp(DpPoint(e.eps, e.delta));
    }
    ZcdpParams operator()(const ZcdpEntry& e) const {
      return ZcdpParams(e.xi, e.rho, e.delta);
    }
    ZcdpParams operator()(const McdpEntry& e) const {
      return mcdp_to_zcdp(McdpParams(e.mu, e.tau));
    }
  };
  return std::visit(Visitor{}, entry.params);
}

ZcdpParams compose_ledger(std::span<const LedgerEntry> entries) {
  if (entries.empty()) throw DomainError("empty ledger");
  std::vector<ZcdpParams> converted;
  converted.reserve(entries.size());
  for (const auto& e : entries) converted.push_back(to_zcdp(e));
  return compose(converted);
}

}  // namespace cdp
