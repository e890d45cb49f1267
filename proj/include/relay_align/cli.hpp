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

#ifndef RELAY_ALIGN_CLI_HPP
#define RELAY_ALIGN_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace relay_align::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;     // bad arguments, schema or IO errors
inline constexpr int kExitNegative = 2;  // infeasible, failed, unsupported

inline constexpr const char* kSeedEnv = "RELAY_ALIGN_SEED";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace relay_align::cli

#endif  // RELAY_ALIGN_CLI_HPP
