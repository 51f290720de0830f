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

// cdp_acct: concentrated differential privacy accountant.
//
//   cdp_acct compose   --ledger budget.json
//   cdp_acct curve     --rho 0.5 --method refined --grid 0.5:5:50 --out c.csv
//   cdp_acct calibrate --sensitivity 1 --eps 1 --delta 1e-6
//   cdp_acct verify    --suite appendix

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cdp/cli.hpp"

namespace {

// Flags shared by every subcommand; each only reads the ones it needs.
void add_common_flags(CLI::App* cmd, cdp::cli::Options& o) {
  cmd->add_option("--ledger", o.ledger, "Ledger JSON file");
  cmd->add_option("--out", o.out, "Output file (CSV for curve, JSON otherwise)");
  cmd->add_option("--delta", o.delta, "Target or reported delta");
  cmd->add_option("--eps", o.eps, "Target or reported epsilon");
  cmd->add_option("--rho", o.rho, "zCDP rho");
  cmd->add_option("--xi", o.xi, "zCDP xi (default 0)");
  cmd->add_option("--sensitivity", o.sensitivity, "Query sensitivity");
  cmd->add_option("--mu", o.mu, "mCDP mu");
  cmd->add_option("--tau", o.tau, "mCDP tau");
  cmd->add_option("--k", o.k, "Group size");
  cmd->add_option("--n", o.n, "Number of entries (mi-demo)");
  cmd->add_option("--method", o.method, "simple | refined | exact_gaussian");
  cmd->add_option("--target", o.target, "delta_of_eps | eps_of_delta");
  cmd->add_option("--grid", o.grid, "LO:HI:N");
  cmd->add_option("--suite", o.suite,
                  "divergence | conversions | group | mi | packing | appendix | all");
  cmd->add_option("--from", o.from, "pure_dp | approx_dp | zcdp | mcdp");
  cmd->add_option("--seed", o.seed, "Seed for randomized checks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentrated differential privacy accountant"};
  app.require_subcommand(1);
  cdp::cli::Options opts;
  const char* commands[][2] = {
      {"compose", "Compose a ledger and report (xi, rho, delta) and DP points"},
      {"curve", "Emit a delta(eps) or eps(delta) curve as CSV"},
      {"calibrate", "Gaussian noise scale for a rho or (eps, delta) target"},
      {"group", "Group privacy for k changed entries"},
      {"convert", "Convert between pure DP, approximate DP, zCDP and mCDP"},
      {"mi-demo", "Mutual information of randomized response vs zCDP bounds"},
      {"verify", "Run a self-verification suite"},
  };
  for (const auto& [name, help] : commands) {
    add_common_flags(app.add_subcommand(name, help), opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cdp::cli::kExitUsage;
  }
  return cdp::cli::run(app.get_subcommands().front()->get_name(), opts, std::cout,
                       std::cerr);
}
