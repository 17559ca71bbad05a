// Copyright 2026 The dasampler Authors
// SPDX-License-Identifier: Apache-2.0
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

#ifndef DASAMPLER_ERRORS_HPP_
#define DASAMPLER_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dasampler {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad magic, version, or truncated payload in a binary file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Two inputs disagree in size (labels vs features, ids vs rows).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or out-of-range labels.
class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Training input that cannot define a separating hyperplane.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Sampling asked for more draws than the population supports.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class InsufficientMassError : public Error {
 public:
  using Error::Error;
};

class ExhaustedPoolError : public Error {
 public:
  using Error::Error;
};

class EpisodeDoneError : public Error {
 public:
  using Error::Error;
};

class ActionRangeError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dasampler

#endif  // DASAMPLER_ERRORS_HPP_
