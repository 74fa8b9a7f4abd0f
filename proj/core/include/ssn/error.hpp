// Copyright 2026 The SSN-CPU Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
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

namespace ssn {

/// Bad shapes, out-of-range parameters, malformed arguments.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values reaching the clustering or the optimizer.
struct NumericError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Unreadable or unwritable files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A file was readable but its contents are not what the format requires.
struct FormatError : IoError {
  using IoError::IoError;
};

/// A checkpoint file is truncated, has a bad header, or holds non-finite values.
struct CheckpointError : FormatError {
  using FormatError::FormatError;
};

/// A checkpoint was loaded but does not fit the requested configuration.
struct ModelMismatch : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

}  // namespace ssn
