// Copyright 2026 The lowlight-rppg Authors. All Rights Reserved.
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
#include <string_view>

namespace rppg {

enum class ErrorCode {
  kEmptyRoi,
  kInvalidPixel,
  kNonMonotonicFrames,
  kMissingFrames,
  kParseError,
  kInvalidHeader,
  kIoError,
  kSeriesTooShort,
  kNonFiniteInput,
  kNyquistViolation,
  kInvalidBand,
  kInvalidWindowLength,
  kDecompositionFailure,
  kZeroSignal,
  kNoComponents,
  kNoAcceptedComponents,
  kWindowSpacingError,
  kTraceTooShort,
  kPairingError,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by bad input data or configuration (CLI exit 2);
/// false for failures inside the numerical pipeline (CLI exit 3).
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rppg
