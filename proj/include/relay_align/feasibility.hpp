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

#ifndef RELAY_ALIGN_FEASIBILITY_HPP
#define RELAY_ALIGN_FEASIBILITY_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relay_align/subspace.hpp"

namespace relay_align {

// Symmetric table of per-pair dimensions, zero on the diagonal. Users are
// indexed from 0.
class PairTable {
 public:
  PairTable() = default;
  explicit PairTable(int users);

  int users() const noexcept { return users_; }
  int at(int i, int j) const;
  void set(int i, int j, int value);
  // sum over j != i
  int row_sum(int i) const;

  bool operator==(const PairTable&) const = default;

 private:
  int users_ = 0;
  std::vector<int> cells_;
};

// (K, N, d_1..d_K) plus optional pairwise dimensions d_ij.
struct StrategySpec {
  int users = 0;
  int antennas = 0;
  std::vector<int> dof;
  std::optional<PairTable> pairwise;

  // Throws InvalidInput on shape errors, InconsistentPairwise when the
  // pairwise table does not reproduce dof.
  void validate() const;
  int total_dof() const;
};

StrategySpec uniform_spec(int users, int antennas, int dof);

enum class TupleVerdict { kFeasible, kSumMismatch, kExceedsAntennas };

TupleVerdict classify_tuple(const StrategySpec& spec);
bool is_feasible_tuple(const StrategySpec& spec);

using PairKey = std::pair<int, int>;  // i < j, 0-based

/// K subspaces of C^N described by explicit bases B_ij of the pairwise
/// intersections. User i's frame (the columns its encoder targets) is the
/// concatenation of B_ij over its partners in layout order; the default
/// layout lists partners in ascending index order.
class Strategy {
 public:
  using Layout = std::vector<std::vector<int>>;

  Strategy(StrategySpec spec, std::map<PairKey, CMatrix> pair_bases,
           std::optional<Layout> layout = std::nullopt);

  const StrategySpec& spec() const noexcept { return spec_; }
  int users() const noexcept { return spec_.users; }
  int antennas() const noexcept { return spec_.antennas; }

  // N x d_ij; empty when the pair shares nothing.
  const CMatrix& pair_basis(int i, int j) const;
  int pair_dim(int i, int j) const;
  const std::map<PairKey, CMatrix>& pair_bases() const noexcept {
    return pair_bases_;
  }

  const std::vector<int>& layout(int user) const { return layout_.at(user); }
  const Layout& layouts() const noexcept { return layout_; }
  bool has_default_layout() const;

  // Column offset of the block user `user` shares with `partner`.
  int slot_offset(int user, int partner) const;
  CMatrix user_frame(int user) const;

  Subspace subspace(int user) const;
  std::vector<Subspace> subspaces() const;
  // Direct sum of the pair bases not involving `user`.
  CMatrix interference_frame(int user) const;

 private:
  StrategySpec spec_;
  std::map<PairKey, CMatrix> pair_bases_;
  Layout layout_;
  CMatrix empty_;
};

struct VerificationReport {
  bool ok = false;

  // (i) dimensions: measured dims, matched against the expected ones when
  // given, and forming a feasible tuple (sum 2N, each <= N).
  struct Dimensions {
    bool ok = false;
    std::vector<int> measured;
    int total = 0;
  } dimensions;

  // (ii) V_i is the direct sum of its pairwise intersections.
  struct Decomposition {
    bool ok = false;
    std::vector<bool> per_user;
    std::vector<int> intersection_dim_sum;
  } decomposition;

  // (iii) C^N is the direct sum of all pairwise intersections.
  struct RelaySpace {
    bool ok = false;
    int pair_dim_total = 0;
    int sum_dim = 0;
  } relay_space;

  PairTable pair_dims;
  int worst_triple_dim = 0;
  std::array<int, 3> worst_triple{-1, -1, -1};

  // Names of failed conditions: "(i)", "(ii)", "(iii)", "triple".
  std::vector<std::string> failures() const;
};

VerificationReport verify_strategy(
    std::span<const Subspace> candidate, int antennas, const Tolerance& tol = {},
    std::optional<std::span<const int>> expected_dims = std::nullopt);

VerificationReport verify_strategy(const Strategy& strategy,
                                   const Tolerance& tol = {});

// Deterministic construction: fold a 2N-dimensional space onto C^N and hand
// user i the next d_i folded coordinate vectors.
Strategy construct_strategy(const StrategySpec& spec);

// K = N = 3, d = 2 on the coordinate basis v1, v2, v3 of C^3: V1 = <v1,v2>,
// V2 = <v2,v3>, V3 = <v1,v3>, with user i's first symbol on v_i and its
// second on v_{i+1}. The relay then sees (x1^1 + x3^2, x1^2 + x2^1,
// x2^2 + x3^1) in that basis.
Strategy three_user_worked_example();

std::vector<Subspace> sample_generic_strategy(const StrategySpec& spec,
                                              Rng& rng);

// Random V_ij in G(d_ij, N) for every pair, V_i the sum of its pair spaces.
// Resamples up to 10 times on numerically degenerate draws.
Strategy strategy_from_pairwise(const StrategySpec& spec, Rng& rng);

inline constexpr int kMaxPairwiseResamples = 10;

// sum_{i<j} d_ij (N - d_ij)
std::int64_t feasible_variety_dim(const StrategySpec& spec);

// Every pair exchanges d/(K-1) symbols, d = 2N/K. Throws InconsistentPairwise
// when that is not an integer.
PairTable symmetric_pairwise_table(int users, int antennas);
// Users (1,2), (3,4), ... exchange all d = 2N/K symbols; K must be even.
PairTable paired_table(int users, int antennas);

// N^2 (1 - 2/(K(K-1))) and N^2 (1 - 2/K), evaluated exactly.
std::int64_t symmetric_pairwise_dim_closed_form(int users, int antennas);
std::int64_t paired_dim_closed_form(int users, int antennas);

struct GenericityResult {
  int passes = 0;
  int trials = 0;
  double rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(passes) / trials;
  }
};

// Trial t draws from the stream derive_seed(seed, {t}).
GenericityResult generic_feasibility_rate(const StrategySpec& spec, int trials,
                                          std::uint64_t seed,
                                          const Tolerance& tol = {});

}  // namespace relay_align

#endif  // RELAY_ALIGN_FEASIBILITY_HPP
