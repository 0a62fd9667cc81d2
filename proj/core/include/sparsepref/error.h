// Copyright 2026 The sparsepref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARSEPREF_ERROR_H_
#define SPARSEPREF_ERROR_H_

#include <stdexcept>
#include <string>

namespace sparsepref {

// Root of the library's exception hierarchy. Each subclass corresponds to one
// failure category; the CLI maps categories to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (sigma <= 0,
// non-finite input, delta outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Vector/matrix dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Index set refers to coordinates outside [0, d) or repeats one.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Operation requires at least one sample.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed its configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition (e.g. parameter outside the
// B-ball).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed dataset, config or result file. The message names the line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written. The message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsepref

#endif  // SPARSEPREF_ERROR_H_
