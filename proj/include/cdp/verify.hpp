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

// Self-verification suites run by `cdp_acct verify`. Every case compares a
// library result (lhs) with an oracle or bound (rhs).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdp {

struct VerifyCase {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<VerifyCase> cases;

  bool passed() const;
};

/// divergence, conversions, group, mi, packing, appendix.
std::span<const std::string_view> suite_names();

/// Throws DomainError for an unknown suite name.
SuiteReport run_suite(std::string_view suite, std::uint64_t seed);

}  // namespace cdp
