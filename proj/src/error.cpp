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

#include "rppg/error.hpp"

namespace rppg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyRoi: return "EmptyRoi";
    case ErrorCode::kInvalidPixel: return "InvalidPixel";
    case ErrorCode::kNonMonotonicFrames: return "NonMonotonicFrames";
    case ErrorCode::kMissingFrames: return "MissingFrames";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidHeader: return "InvalidHeader";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSeriesTooShort: return "SeriesTooShort";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kNyquistViolation: return "NyquistViolation";
    case ErrorCode::kInvalidBand: return "InvalidBand";
    case ErrorCode::kInvalidWindowLength: return "InvalidWindowLength";
    case ErrorCode::kDecompositionFailure: return "DecompositionFailure";
    case ErrorCode::kZeroSignal: return "ZeroSignal";
    case ErrorCode::kNoComponents: return "NoComponents";
    case ErrorCode::kNoAcceptedComponents: return "NoAcceptedComponents";
    case ErrorCode::kWindowSpacingError: return "WindowSpacingError";
    case ErrorCode::kTraceTooShort: return "TraceTooShort";
    case ErrorCode::kPairingError: return "PairingError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyRoi:
    case ErrorCode::kInvalidPixel:
    case ErrorCode::kNonMonotonicFrames:
    case ErrorCode::kMissingFrames:
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidHeader:
    case ErrorCode::kIoError:
    case ErrorCode::kNonFiniteInput:
    case ErrorCode::kNyquistViolation:
    case ErrorCode::kInvalidBand:
    case ErrorCode::kInvalidWindowLength:
    case ErrorCode::kTraceTooShort:
    case ErrorCode::kPairingError:
    case ErrorCode::kConfigError:
    case ErrorCode::kSeriesTooShort:
      return true;
    default:
      return false;
  }
}

}  // namespace rppg
