/*
 * Copyright 2026 The relacq Authors.
 *
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

#ifndef RELACQ_ERRORS_HPP_
#define RELACQ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace relacq {

// Base for every runtime failure raised by the library. Precondition
// violations on arguments are reported with std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model file that cannot be read: wrong format_version, missing or
// malformed fields.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

// A model file written with an unsupported format_version.
class ModelVersionError : public ModelFormatError {
 public:
  using ModelFormatError::ModelFormatError;
};

// A data or cost file that cannot be ingested.
class DataFormatError : public Error {
 public:
  using Error::Error;
};

// Raised by a selector when every feature is already acquired.
class NoUnknownFeatures : public Error {
 public:
  NoUnknownFeatures() : Error("no unknown features left to acquire") {}
};

// Raised by an oracle that cannot reveal a value.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace relacq

#endif  // RELACQ_ERRORS_HPP_
