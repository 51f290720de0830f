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

#pragma once

#include <stdexcept>
#include <string>

namespace cdp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that violate an operation's precondition: mismatched outcome sets,
// unnormalized distributions, parameters outside a lemma's hypothesis.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidOrder : public DomainError {
 public:
  using DomainError::DomainError;
};

// A conversion was queried outside the range where its bound is stated,
// e.g. eps < xi + rho for the refined zCDP -> DP conversion.
class OutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace cdp
