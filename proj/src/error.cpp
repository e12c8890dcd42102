// Copyright 2026 The bfctomo Authors
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

#include "bfc/error.hpp"

namespace bfc {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotUnitTrace: return "NotUnitTrace";
    case ErrorCode::kNotPSD: return "NotPSD";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kInvalidArguments: return "InvalidArguments";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kSingularInput: return "SingularInput";
    case ErrorCode::kZeroTrace: return "ZeroTrace";
    case ErrorCode::kAdaptationFailed: return "AdaptationFailed";
    case ErrorCode::kEmptyChain: return "EmptyChain";
    case ErrorCode::kMissingJSISetting: return "MissingJSISetting";
    case ErrorCode::kBandOutOfRange: return "BandOutOfRange";
    case ErrorCode::kFitDiverged: return "FitDiverged";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    }
    return "Unknown";
}

} // namespace bfc
