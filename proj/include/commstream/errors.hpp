// Copyright 2026, The commstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace commstream {

/// Base of every error raised by the library. The C API maps each subclass to
/// a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (out-of-domain value, too few
/// instances, invalid configuration).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A record could not be parsed or violates its schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A build references a work item that is not present in the input.
class IngestError : public Error {
 public:
  using Error::Error;
};

class NumericsError : public Error {
 public:
  using Error::Error;
};

class EmptyWindowError : public Error {
 public:
  using Error::Error;
};

class EmptyModelError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace commstream
