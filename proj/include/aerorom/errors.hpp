// Copyright 2026 The aerorom Authors
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

namespace aerorom {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong sizes, out-of-domain values, bad codes.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A deformed profile or mesh that is no longer a valid geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Linear-algebra failure while fitting a model (singular systems,
/// failed factorizations, degenerate data).
class FitError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (pipeline config, cutoff radii, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace aerorom
