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

// Privacy budget calculus: zCDP composition, group privacy, and conversions
// between pure DP, approximate DP, zCDP, approximate zCDP and mCDP.
//
// Every returned delta is clamped to [0, 1].

#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cdp/mechanisms.hpp"

namespace cdp {

/// delta_approx-approximate (xi, rho)-zCDP. delta_approx = 0 is plain zCDP;
/// rho = 0 with xi = eps encodes eps-DP.
class ZcdpParams {
 public:
  ZcdpParams(double xi, double rho, double delta_approx = 0.0);

  double xi() const { return xi_; }
  double rho() const { return rho_; }
  double delta_approx() const { return delta_approx_; }

  bool operator==(const ZcdpParams&) const = default;

 private:
  double xi_;
  double rho_;
  double delta_approx_;
};

class DpPoint {
 public:
  DpPoint(double eps, double delta);

  double eps() const { return eps_; }
  double delta() const { return delta_; }

 private:
  double eps_;
  double delta_;
};

class McdpParams {
 public:
  McdpParams(double mu, double tau);

  double mu() const { return mu_; }
  double tau() const { return tau_; }

 private:
  double mu_;
  double tau_;
};

/// Composition: sums xi and rho, and combines deltas as 1 - prod(1 - delta_i).
/// Throws DomainError on an empty sequence.
ZcdpParams compose(std::span<const ZcdpParams> entries);

/// (xi k H_k, rho k^2) with H_k the k-th harmonic number. Only defined for
/// plain zCDP; approximate zCDP throws Unsupported.
ZcdpParams group_privacy(const ZcdpParams& params, int k);

/// eps = xi + rho + sqrt(4 rho log(1/delta)).
DpPoint zcdp_to_dp_simple(const ZcdpParams& params, double delta);

/// The delta implied at `eps` by inverting the simple conversion:
/// exp(-(eps - xi - rho)^2 / (4 rho)), and 1 for eps <= xi + rho.
double zcdp_to_dp_simple_delta(const ZcdpParams& params, double eps);

/// The four candidate factors multiplying exp(-(eps-xi-rho)^2/(4 rho)) in
/// the refined conversion, in order: 1, sqrt(pi rho), 1/(1+x/(2rho)) and
/// 2/(1+x/(2rho)+sqrt((1+x/(2rho))^2 + 4/(pi rho))), where x = eps-xi-rho.
std::array<double, 4> refined_branches(const ZcdpParams& params, double eps);

/// Refined delta(eps) for plain zCDP. Requires rho > 0 and eps >= xi + rho
/// (OutOfRange otherwise).
double zcdp_to_dp_refined(const ZcdpParams& params, double eps);

enum class ConversionMethod { kSimple, kRefined };

/// Smallest eps with delta(eps) <= delta under `method`. The refined inverse
/// is a monotone bisection to absolute tolerance 1e-10 in eps. With rho = 0
/// the answer is xi.
double eps_for_delta(const ZcdpParams& params, double delta,
                     ConversionMethod method);

/// eps-DP as (eps, 0)-zCDP (first) and as (0, eps^2/2)-zCDP (second).
std::pair<ZcdpParams, ZcdpParams> pure_dp_to_zcdp(double eps);

/// A mechanism that is (xi_hat + sqrt(rho_hat log(1/delta)), delta)-DP for
/// all delta > 0 is (xi_hat - rho_hat/4 + 5 rho_hat^{1/4}, rho_hat/4)-zCDP.
/// Both inputs must lie in [0, 1].
ZcdpParams dp_family_to_zcdp(double xi_hat, double rho_hat);

/// (mu - tau^2/2, tau^2/2). Rejects mu < tau^2/2.
ZcdpParams mcdp_to_zcdp(const McdpParams& params);

/// (xi + rho, sqrt(8 (exp(xi + 2 rho) - 1))). The scale constant is a
/// documented choice for the asymptotic O(sqrt(xi + 2 rho)).
McdpParams zcdp_to_mcdp(const ZcdpParams& params);

struct ApproxZcdpForms {
  ZcdpParams pure_form;       // delta-approximate (eps, 0)-zCDP
  ZcdpParams quadratic_form;  // delta-approximate (0, eps^2/2)-zCDP
};

/// (eps, delta)-DP as delta-approximate zCDP. Returns the quadratic form;
/// use dp_to_approx_zcdp_forms for both.
ZcdpParams dp_to_approx_zcdp(const DpPoint& pt);
ApproxZcdpForms dp_to_approx_zcdp_forms(const DpPoint& pt);

/// delta-approximate (xi, rho)-zCDP as DP. With rho = 0 returns
/// (xi, delta_approx) regardless of eps; otherwise
/// (eps, delta_approx + (1 - delta_approx) delta') with delta' the refined
/// bound at eps.
DpPoint approx_zcdp_to_dp(const ZcdpParams& params, double eps);

/// Composition of (eps_i, delta_i)-DP mechanisms through zCDP in the
/// simplified closed form: eps = ||e||^2/2 + sqrt(2 log(sqrt(pi/2)||e||/d'))
/// ||e|| and delta = d' + sum delta_i. When the logarithm is not positive the
/// lambda = 0 endpoint eps = ||e||^2/2 is returned.
DpPoint dp_composition_bound(std::span<const DpPoint> points,
                             double delta_prime);

/// Same composition via the full refined minimum: at `eps` >= rho with
/// rho = ||e||^2/2, returns 1 - (1 - delta') prod(1 - delta_i).
double dp_composition_refined_delta(std::span<const DpPoint> points,
                                    double eps);

/// Classical advanced composition baseline
/// sqrt(2 log(1/d') sum eps_i^2) + sum eps_i (e^{eps_i} - 1), used only as a
/// comparison target.
double advanced_composition_eps(std::span<const DpPoint> points,
                                double delta_prime);

enum class LedgerKind { kGaussian, kPureDp, kApproxDp, kZcdp, kMcdp };

struct GaussianEntry {
  double sensitivity;
  double sigma;
};
struct PureDpEntry {
  double eps;
};
struct ApproxDpEntry {
  double eps;
  double delta;
};
struct ZcdpEntry {
  double xi;
  double rho;
  double delta;
};
struct McdpEntry {
  double mu;
  double tau;
};

using LedgerParams =
    std::variant<GaussianEntry, PureDpEntry, ApproxDpEntry, ZcdpEntry, McdpEntry>;

/// One mechanism invocation awaiting composition.
struct LedgerEntry {
  LedgerParams params;
  std::string label;

  LedgerKind kind() const { return static_cast<LedgerKind>(params.index()); }
};

const char* to_string(LedgerKind kind);

/// Per-entry conversion used before composition. Pure DP uses the quadratic
/// (0, eps^2/2) form.
ZcdpParams to_zcdp(const LedgerEntry& entry);

/// Converts every entry and composes. Throws DomainError on an empty ledger.
ZcdpParams compose_ledger(std::span<const LedgerEntry> entries);

}  // namespace cdp
