// Copyright 2026 The cvswitch Authors
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

#ifndef CVSWITCH_ERRORS_H
#define CVSWITCH_ERRORS_H

#include <stdexcept>
#include <string>

namespace cvswitch {

/// Base for failures caused by bad inputs (ranges, lengths, windows). The CLI maps these to exit code 1.
class InputError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical routine on valid inputs. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class InvalidRange : public InputError {
   public:
    using InputError::InputError;
};

class LengthMismatch : public InputError {
   public:
    using InputError::InputError;
};

class NonPositiveInput : public InputError {
   public:
    using InputError::InputError;
};

/// The two branches of a controlled word end at different net displacements.
class BranchMismatch : public InputError {
   public:
    using InputError::InputError;
};

/// x_bar = 0 makes the (A, x_bar) parameterization singular.
class SingularParameterization : public InputError {
   public:
    using InputError::InputError;
};

class SingularFisher : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class TruncationTooSmall : public NumericalError {
   public:
    TruncationTooSmall(const std::string &msg, size_t suggested_dim)
        : NumericalError(msg), suggested_dim(suggested_dim) {
    }
    size_t suggested_dim;
};

class OptimizationDiverged : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace cvswitch

#endif
