/*
Copyright 2026 The sddrt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef SDDRT_ERROR_HPP_
#define SDDRT_ERROR_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sddrt {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, shape mismatches and violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// File could not be read, written or decoded.
class IoError : public Error {
 public:
  using Error::Error;
};

// The estimator could not produce a value for otherwise valid input
// (e.g. too few decays in the signal). Maps to CLI exit code 2.
class EstimationError : public Error {
 public:
  using Error::Error;
};

using WarningHandler = std::function<void(std::string_view)>;

// Installs a process-wide sink for non-fatal warnings (clipping, channel
// dropping, truncated image expansion). The default writes to stderr.
// Returns the previous handler.
WarningHandler SetWarningHandler(WarningHandler handler);

void Warn(std::string_view message);

}  // namespace sddrt

#endif  // SDDRT_ERROR_HPP_
