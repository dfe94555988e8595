// Copyright 2026 The fracgreen Authors.
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
#include <vector>

namespace fracgreen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model or operation parameters outside their admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the (closed) domain an operation requires.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a kernel singularity (coincident points, inversion center).
class SingularityError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Tail of a principal-value integral is not integrable under the given
/// growth hint.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Iteration collapsed to the trivial fixed point.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history)
      : Error(what), residual_history(std::move(history)) {}

  std::vector<double> residual_history;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Configuration problems; `key_path` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_path(std::move(key)) {}

  std::string key_path;
};

}  // namespace fracgreen
