// Copyright 2026 The holoqed Authors
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

namespace holoqed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dimension argument is outside its allowed range (e.g. Fock cutoff < 2).
class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// The operation is defined only for specific dimensions (e.g. 2 or 3 transmon levels).
class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// Operands live on incompatible Hilbert spaces, or a factor label is unknown.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// Physical parameters violate a structural requirement.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input or a violated numerical invariant.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class PropagationError : public Error {
 public:
  enum class Kind { StepUnderflow, TraceDrift, StepLimit };

  PropagationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace holoqed
