// Copyright 2026 The xlmatch Authors.
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

#ifndef XLMATCH_ERRORS_H_
#define XLMATCH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace xlmatch {

// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that violates a documented contract. The CLI maps these to exit 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A malformed line in a text file. Carries the 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string &path, int line, const std::string &what)
      : ValidationError(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// Inconsistent numeric layout, e.g. a vector row with the wrong dimension.
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ArgumentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TypeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Prediction files that do not cover the same pair ids.
class AlignmentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CalibrationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Unreadable or unwritable files. The CLI maps these to exit 2.
class IoError : public Error {
 public:
  using Error::Error;
};

// A model file that is truncated or otherwise corrupt.
class LoadError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace xlmatch

#endif  // XLMATCH_ERRORS_H_
