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

#ifndef RELAY_ALIGN_ERROR_HPP
#define RELAY_ALIGN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace relay_align {

enum class ErrorCode {
  kInvalidInput,
  kDimensionMismatch,
  kInfeasibleTuple,
  kInconsistentPairwise,
  kResampleExhausted,
  kSingularChannel,
  kSecrecyViolation,
  kStrategyInvalid,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// All library failures are reported through this exception type; the code
// identifies the failure class, the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relay_align

#endif  // RELAY_ALIGN_ERROR_HPP
