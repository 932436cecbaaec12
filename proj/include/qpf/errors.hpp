// Copyright 2026 The qpf Authors
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

namespace qpf {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON syntax, circuit dump grammar).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a documented invariant.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Factorization failure, singular matrix, no crossover in range.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NoCrossover : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Requested measurement outcome has (numerically) zero probability.
class PostSelectionError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpf
