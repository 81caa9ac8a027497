// Copyright 2026 The rswsqueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace rsw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Base for every failure raised by the numerics (exit status 2 in the CLI).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A static spin-wave spectrum has A_q^2 < B_q^2.
class InstabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The squeezing denominator vanished; xi^2 is undefined.
class LostMeanSpinError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DecompositionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rsw
