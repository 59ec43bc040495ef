/*
 * Copyright 2026 The FairUDT Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAIRUDT_ERRORS_H_
#define FAIRUDT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fairudt {

// Base of every error raised by the library. The CLI maps each subclass to a
// process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags, missing columns, out-of-range parameters. Exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input data. Exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

// Label or sensitive column does not match its declared binary values.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

// Malformed tree / plan / schema document.
class ParseError : public DataError {
 public:
  using DataError::DataError;
};

// A fairness or performance metric whose denominator is zero.
class MetricUndefinedError : public DataError {
 public:
  using DataError::DataError;
};

// KL divergence against a reference with zero mass where the other
// distribution is positive.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant. Exit code 4.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairudt

#endif  // FAIRUDT_ERRORS_H_
