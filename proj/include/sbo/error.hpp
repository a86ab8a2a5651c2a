// Copyright 2026 The SBO Toolkit Authors.
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

#ifndef SBO_ERROR_HPP_
#define SBO_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sbo {

// Root of everything the library throws. The CLI maps the branches below onto
// distinct exit codes: ValidationError -> 2, SizeError -> 3, IoError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad probabilities, out-of-range bids, wrong model, etc.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidWeightError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ModelMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A configured cap (joint support, keyword count) was exceeded.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbo

#endif  // SBO_ERROR_HPP_
