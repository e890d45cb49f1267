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

#include "relay_align/strategy_json.hpp"

#include <string>

#include "relay_align/error.hpp"

namespace relay_align {
namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError(what); }

int get_int(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    schema_fail(std::string("missing or non-integer field '") + key + "'");
  }
  return j.at(key).get<int>();
}

std::optional<std::pair<int, int>> parse_pair_name(const std::string& name) {
  const auto dash = name.find('-');
  if (dash == std::string::npos) return std::nullopt;
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const int a = std::stoi(name.substr(0, dash), &used_a);
    const int b = std::stoi(name.substr(dash + 1), &used_b);
    if (used_a != dash || used_b != name.size() - dash - 1) return std::nullopt;
    return std::pair{a, b};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

PairKey pair_key_from_name(const std::string& name, int users) {
  const auto parsed = parse_pair_name(name);
  if (!parsed) schema_fail("malformed pair key '" + name + "'");
  const auto [a, b] = *parsed;
  if (a < 1 || b < 1 || a > users || b > users || a == b) {
    schema_fail("pair key '" + name + "' out of range");
  }
  return a < b ? PairKey{a - 1, b - 1} : PairKey{b - 1, a - 1};
}

}  // namespace

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j, int rows) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    schema_fail("matrix must have " + std::to_string(rows) + " rows");
  }
  const std::size_t cols = rows == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0);
  CMatrix m(rows, static_cast<Eigen::Index>(cols));
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols) schema_fail("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        schema_fail("matrix entries must be [re, im] number pairs");
      }
      m(r, static_cast<Eigen::Index>(c)) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

std::string pair_key_name(int i, int j) {
  if (i > j) std::swap(i, j);
  return std::to_string(i + 1) + "-" + std::to_string(j + 1);
}

json strategy_to_json(const Strategy& strategy, std::optional<std::uint64_t> seed) {
  json j;
  j["schema"] = kStrategySchema;
  j["schema_version"] = kStrategySchemaVersion;
  j["K"] = strategy.users();
  j["N"] = strategy.antennas();
  j["d"] = strategy.spec().dof;
  json bases = json::object();
  for (const auto& [key, b] : strategy.pair_bases()) {
    bases[pair_key_name(key.first, key.second)] = matrix_to_json(b);
  }
  j["pair_bases"] = std::move(bases);
  if (!strategy.has_default_layout()) {
    json layout = json::array();
    for (const auto& partners : strategy.layouts()) {
      json row = json::array();
      for (int p : partners) row.push_back(p + 1);
      layout.push_back(std::move(row));
    }
    j["layout"] = std::move(layout);
  }
  if (seed) j["seed"] = *seed;
  return j;
}

StrategyFile strategy_from_json(const json& j) {
  if (!j.is_object()) schema_fail("strategy file must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kStrategySchema) {
    schema_fail("unknown schema");
  }
  if (j.contains("schema_version") && j.at("schema_version") != kStrategySchemaVersion) {
    schema_fail("unsupported schema_version");
  }

  StrategyFile out;
  out.users = get_int(j, "K");
  out.antennas = get_int(j, "N");
  if (out.users < 2 || out.antennas < 1) schema_fail("need K >= 2 and N >= 1");
  if (!j.contains("d") || !j.at("d").is_array()) schema_fail("missing 'd' array");
  for (const auto& v : j.at("d")) {
    if (!v.is_number_integer() || v.get<int>() < 0) {
      schema_fail("'d' entries must be non-negative integers");
    }
    out.dof.push_back(v.get<int>());
  }
  if (static_cast<int>(out.dof.size()) != out.users) schema_fail("'d' must have K entries");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) schema_fail("'seed' must be unsigned");
    out.seed = j.at("seed").get<std::uint64_t>();
  }

  if (!j.contains("pair_bases") && !j.contains("subspaces")) {
    schema_fail("file needs 'pair_bases' or 'subspaces'");
  }

  try {
    if (j.contains("pair_bases")) {
      const json& pb = j.at("pair_bases");
      if (!pb.is_object()) schema_fail("'pair_bases' must be an object");
      std::map<PairKey, CMatrix> bases;
      for (const auto& [name, value] : pb.items()) {
        const PairKey key = pair_key_from_name(name, out.users);
        if (bases.count(key)) schema_fail("duplicate pair '" + name + "'");
        bases.emplace(key, matrix_from_json(value, out.antennas));
      }
      std::optional<Strategy::Layout> layout;
      if (j.contains("layout")) {
        const json& lj = j.at("layout");
        if (!lj.is_array()) schema_fail("'layout' must be an array");
        Strategy::Layout l;
        for (const auto& row : lj) {
          if (!row.is_array()) schema_fail("'layout' rows must be arrays");
          std::vector<int> partners;
          for (const auto& p : row) {
            if (!p.is_number_integer()) schema_fail("layout entries must be integers");
            partners.push_back(p.get<int>() - 1);
          }
          l.push_back(std::move(partners));
        }
        layout = std::move(l);
      }
      StrategySpec spec;
      spec.users = out.users;
      spec.antennas = out.antennas;
      spec.dof = out.dof;
      out.strategy.emplace(std::move(spec), std::move(bases), std::move(layout));
      out.candidates = out.strategy->subspaces();
    }

    if (j.contains("subspaces")) {
      const json& sj = j.at("subspaces");
      if (!sj.is_array() || static_cast<int>(sj.size()) != out.users) {
        schema_fail("'subspaces' must list K matrices");
      }
      out.candidates.clear();
      for (const auto& m : sj) {
        out.candidates.push_back(orthonormal_basis(matrix_from_json(m, out.antennas)));
      }
    }
  } catch (const Error& e) {
    schema_fail(e.what());
  }
  return out;
}

StrategyFile parse_strategy_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_fail(std::string("invalid JSON: ") + e.what());
  }
  return strategy_from_json(j);
}

PairTable pair_table_from_json(const json& j, int users) {
  PairTable t(users);
  const json& src = j.is_object() && j.contains("pairs") ? j.at("pairs") : j;
  if (src.is_object()) {
    for (const auto& [name, value] : src.items()) {
      const PairKey key = pair_key_from_name(name, users);
      if (!value.is_number_integer()) schema_fail("d_ij must be an integer");
      t.set(key.first, key.second, value.get<int>());
    }
    return t;
  }
  if (src.is_array()) {
    if (static_cast<int>(src.size()) != users) schema_fail("d_ij table must be K x K");
    for (int i = 0; i < users; ++i) {
      if (!src[i].is_array() || static_cast<int>(src[i].size()) != users) {
        schema_fail("d_ij table must be K x K");
      }
      for (int k = 0; k < users; ++k) {
        if (!src[i][k].is_number_integer()) schema_fail("d_ij must be an integer");
      }
    }
    for (int i = 0; i < users; ++i) {
      if (src[i][i].get<int>() != 0) schema_fail("d_ii must be 0");
      for (int k = i + 1; k < users; ++k) {
        if (src[i][k] != src[k][i]) schema_fail("d_ij table must be symmetric");
        t.set(i, k, src[i][k].get<int>());
      }
    }
    return t;
  }
  schema_fail("d_ij must be an object or a K x K array");
}

}  // namespace relay_align
