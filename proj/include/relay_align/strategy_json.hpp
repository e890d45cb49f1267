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

// Strategy file format (schema "relay-align.strategy", version 1):
//
//   {
//     "schema": "relay-align.strategy", "schema_version": 1,
//     "K": 3, "N": 3, "d": [2, 2, 2],
//     "pair_bases": { "1-2": [[[re, im], ...], ...], ... },
//     "layout": [[3, 2], [1, 3], [2, 1]],          (optional)
//     "subspaces": [ matrix, ... ],                 (optional)
//     "seed": 7                                     (optional)
//   }
//
// Users are numbered from 1. Matrices are row-major nested arrays of
// [re, im] pairs. A file carries either "pair_bases" (a full strategy) or
// "subspaces" (bare candidate subspaces, orthonormalized on load), or both,
// in which case "subspaces" wins for verification.

#ifndef RELAY_ALIGN_STRATEGY_JSON_HPP
#define RELAY_ALIGN_STRATEGY_JSON_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "relay_align/feasibility.hpp"

namespace relay_align {

inline constexpr const char* kStrategySchema = "relay-align.strategy";
inline constexpr int kStrategySchemaVersion = 1;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json complex_to_json(Complex c);
nlohmann::json matrix_to_json(const CMatrix& m);
// `rows` fixes the row count for matrices with zero columns.
CMatrix matrix_from_json(const nlohmann::json& j, int rows);

std::string pair_key_name(int i, int j);  // 0-based in, "i-j" 1-based out

nlohmann::json strategy_to_json(const Strategy& strategy,
                                std::optional<std::uint64_t> seed = std::nullopt);

struct StrategyFile {
  int users = 0;
  int antennas = 0;
  std::vector<int> dof;
  std::optional<Strategy> strategy;
  std::vector<Subspace> candidates;  // what verification should look at
  std::optional<std::uint64_t> seed;
};

// Throws SchemaError on any structural problem.
StrategyFile strategy_from_json(const nlohmann::json& j);
StrategyFile parse_strategy_text(const std::string& text);

// Pairwise table from either {"1-2": n, ...} (optionally under "pairs") or a
// K x K nested array.
PairTable pair_table_from_json(const nlohmann::json& j, int users);

}  // namespace relay_align

#endif  // RELAY_ALIGN_STRATEGY_JSON_HPP
