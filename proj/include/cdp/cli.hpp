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

// Batch front end for cdp_acct. Commands write to caller-provided streams
// and return a process exit code, so they can be exercised in-process.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdp/accountant.hpp"
#include "cdp/errors.hpp"

namespace cdp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

/// Bad flags or a malformed ledger. Maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Unreadable input or unwritable output. Maps to exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Ledger JSON, either {"entries": [...]} or a bare array of entries. Each
/// entry is {"kind": ..., "params": {...}, "label": ...}; label is optional.
/// Errors carry "<source>:<line>: " prefixes.
std::vector<LedgerEntry> parse_ledger(std::string_view text,
                                      const std::string& source = "ledger");
std::vector<LedgerEntry> load_ledger(const std::string& path);

/// 12 significant digits, lowercase scientific ("1.00000000000e+00").
/// Infinities print as "inf" / "-inf".
std::string format_number(double x);

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;

  /// "LO:HI:N" with lo < hi and N >= 2.
  static Grid parse(std::string_view text);
  std::vector<double> values() const;
};

enum class CurveTarget { kDeltaOfEps, kEpsOfDelta };
enum class CurveMethod { kSimple, kRefined, kExactGaussian };

CurveTarget parse_target(std::string_view text);
CurveMethod parse_method(std::string_view text);
const char* to_string(CurveMethod method);

/// Curve values at each x, in grid order. Work is spread over `threads`
/// workers; the result does not depend on the thread count.
std::vector<double> curve_values(const ZcdpParams& params, CurveTarget target,
                                 CurveMethod method,
                                 const std::vector<double>& xs, int threads);

/// Worker count: hardware concurrency capped by CDP_ACCT_THREADS when set.
int thread_budget();

struct Options {
  std::optional<std::string> ledger;
  std::optional<std::string> out;
  std::optional<std::string> grid;
  std::optional<std::string> method;
  std::optional<std::string> target;
  std::optional<std::string> suite;
  std::optional<std::string> from;
  std::optional<double> delta;
  std::optional<double> eps;
  std::optional<double> rho;
  std::optional<double> xi;
  std::optional<double> sensitivity;
  std::optional<double> mu;
  std::optional<double> tau;
  std::optional<int> k;
  std::optional<int> n;
  std::uint64_t seed = 20160516;
};

int cmd_compose(const Options& opts, std::ostream& out);
int cmd_curve(const Options& opts, std::ostream& out);
int cmd_calibrate(const Options& opts, std::ostream& out);
int cmd_group(const Options& opts, std::ostream& out);
int cmd_convert(const Options& opts, std::ostream& out);
int cmd_mi_demo(const Options& opts, std::ostream& out);
int cmd_verify(const Options& opts, std::ostream& out);

/// Dispatches by name and maps exceptions to exit codes, printing the
/// message to `err`.
int run(std::string_view command, const Options& opts, std::ostream& out,
        std::ostream& err);

}  // namespace cdp::cli
