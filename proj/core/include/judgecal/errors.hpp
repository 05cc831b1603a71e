// Copyright 2026 The judgecal Authors
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

#pragma once

#include <stdexcept>

namespace judgecal {

// Input or contract violations. The command line tool maps these to exit
// code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric failures (non-finite objectives and the like). Exit code 2.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyInput : ValidationError {
    using ValidationError::ValidationError;
};

struct EmptyCalibrationSet : ValidationError {
    using ValidationError::ValidationError;
};

struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};

struct MixedItems : ValidationError {
    using ValidationError::ValidationError;
};

struct DuplicateLabel : ValidationError {
    using ValidationError::ValidationError;
};

struct LengthMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct TooFewRaters : ValidationError {
    using ValidationError::ValidationError;
};

struct InsufficientData : ValidationError {
    using ValidationError::ValidationError;
};

struct MissingOrder : ValidationError {
    using ValidationError::ValidationError;
};

struct MissingConfidence : ValidationError {
    using ValidationError::ValidationError;
};

struct NonFiniteObjective : NumericError {
    using NumericError::NumericError;
};

}  // namespace judgecal
