// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The relay-align Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relay_align/error.hpp"

namespace relay_align {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "InvalidInput";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kInfeasibleTuple:
      return "InfeasibleTuple";
    case ErrorCode::kInconsistentPairwise:
      return "InconsistentPairwise";
    case ErrorCode::kResampleExhausted:
      return "ResampleExhausted";
    case ErrorCode::kSingularChannel:
      return "SingularChannel";
    case ErrorCode::kSecrecyViolation:
      return "SecrecyViolation";
    case ErrorCode::kStrategyInvalid:
      return "StrategyInvalid";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace relay_align
