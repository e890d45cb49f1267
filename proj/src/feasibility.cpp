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

#include "relay_align/feasibility.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "relay_align/error.hpp"
#include "relay_align/seeding.hpp"

namespace relay_align {
namespace {

constexpr double kPairBasisOrthonormalTol = 1e-10;

PairKey ordered(int i, int j) { return i < j ? PairKey{i, j} : PairKey{j, i}; }

void check_user(int user, int users) {
  if (user < 0 || user >= users) {
    throw Error(ErrorCode::kInvalidInput,
                "user index " + std::to_string(user) + " out of range");
  }
}

}  // namespace

PairTable::PairTable(int users) : users_(users) {
  if (users < 0) throw Error(ErrorCode::kInvalidInput, "negative user count");
  cells_.assign(static_cast<std::size_t>(users) * users, 0);
}

int PairTable::at(int i, int j) const {
  check_user(i, users_);
  check_user(j, users_);
  return cells_[static_cast<std::size_t>(i) * users_ + j];
}

void PairTable::set(int i, int j, int value) {
  check_user(i, users_);
  check_user(j, users_);
  if (i == j) throw Error(ErrorCode::kInvalidInput, "pair needs two users");
  cells_[static_cast<std::size_t>(i) * users_ + j] = value;
  cells_[static_cast<std::size_t>(j) * users_ + i] = value;
}

int PairTable::row_sum(int i) const {
  int s = 0;
  for (int j = 0; j < users_; ++j) {
    if (j != i) s += at(i, j);
  }
  return s;
}

void StrategySpec::validate() const {
  if (users < 2) throw Error(ErrorCode::kInvalidInput, "need at least 2 users");
  if (antennas < 1) {
    throw Error(ErrorCode::kInvalidInput, "need at least 1 antenna");
  }
  if (static_cast<int>(dof.size()) != users) {
    throw Error(ErrorCode::kInvalidInput,
                "expected " + std::to_string(users) + " degrees of freedom, got " +
                    std::to_string(dof.size()));
  }
  for (int d : dof) {
    if (d < 0) throw Error(ErrorCode::kInvalidInput, "negative dof");
  }
  if (!pairwise) return;
  if (pairwise->users() != users) {
    throw Error(ErrorCode::kInvalidInput, "pairwise table has wrong size");
  }
  for (int i = 0; i < users; ++i) {
    for (int j = i + 1; j < users; ++j) {
      if (pairwise->at(i, j) < 0) {
        throw Error(ErrorCode::kInconsistentPairwise, "negative d_ij");
      }
    }
    if (pairwise->row_sum(i) != dof[i]) {
      throw Error(ErrorCode::kInconsistentPairwise,
                  "pairwise dimensions of user " + std::to_string(i + 1) +
                      " sum to " + std::to_string(pairwise->row_sum(i)) +
                      ", expected " + std::to_string(dof[i]));
    }
  }
}

int StrategySpec::total_dof() const {
  return std::accumulate(dof.begin(), dof.end(), 0);
}

StrategySpec uniform_spec(int users, int antennas, int dof) {
  StrategySpec s;
  s.users = users;
  s.antennas = antennas;
  s.dof.assign(users < 0 ? 0 : users, dof);
  return s;
}

TupleVerdict classify_tuple(const StrategySpec& spec) {
  spec.validate();
  if (spec.total_dof() != 2 * spec.antennas) return TupleVerdict::kSumMismatch;
  if (*std::max_element(spec.dof.begin(), spec.dof.end()) > spec.antennas) {
    return TupleVerdict::kExceedsAntennas;
  }
  return TupleVerdict::kFeasible;
}

bool is_feasible_tuple(const StrategySpec& spec) {
  return classify_tuple(spec) == TupleVerdict::kFeasible;
}

// ---------------------------------------------------------------------------

Strategy::Strategy(StrategySpec spec, std::map<PairKey, CMatrix> pair_bases,
                   std::optional<Layout> layout)
    : spec_(std::move(spec)), pair_bases_(std::move(pair_bases)) {
  spec_.validate();
  const int k = spec_.users;
  const int n = spec_.antennas;
  empty_ = CMatrix(n, 0);

  for (auto it = pair_bases_.begin(); it != pair_bases_.end();) {
    const auto [i, j] = it->first;
    if (i < 0 || j >= k || i >= j) {
      throw Error(ErrorCode::kInvalidInput, "pair keys must satisfy i < j");
    }
    const CMatrix& b = it->second;
    if (b.rows() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "pair basis must have N rows");
    }
    if (!b.allFinite()) {
      throw Error(ErrorCode::kInvalidInput, "pair basis has non-finite entries");
    }
    const double err =
        (b.adjoint() * b - CMatrix::Identity(b.cols(), b.cols())).norm();
    if (err > kPairBasisOrthonormalTol) {
      throw Error(ErrorCode::kInvalidInput,
                  "pair basis " + std::to_string(i + 1) + "-" +
                      std::to_string(j + 1) + " is not orthonormal");
    }
    if (b.cols() == 0) {
      it = pair_bases_.erase(it);
    } else {
      ++it;
    }
  }

  for (int i = 0; i < k; ++i) {
    int total = 0;
    for (int j = 0; j < k; ++j) {
      if (j != i) total += pair_dim(i, j);
    }
    if (total != spec_.dof[i]) {
      throw Error(ErrorCode::kInconsistentPairwise,
                  "pair bases of user " + std::to_string(i + 1) + " have " +
                      std::to_string(total) + " columns, expected " +
                      std::to_string(spec_.dof[i]));
    }
  }

  if (layout) {
    if (static_cast<int>(layout->size()) != k) {
      throw Error(ErrorCode::kInvalidInput, "layout needs one entry per user");
    }
    for (int i = 0; i < k; ++i) {
      std::vector<int> sorted = (*layout)[i];
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> expected;
      for (int j = 0; j < k; ++j) {
        if (j != i) expected.push_back(j);
      }
      if (sorted != expected) {
        throw Error(ErrorCode::kInvalidInput,
                    "layout of user " + std::to_string(i + 1) +
                        " must list every partner exactly once");
      }
    }
    layout_ = std::move(*layout);
  } else {
    layout_.resize(k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (j != i) layout_[i].push_back(j);
      }
    }
  }
}

const CMatrix& Strategy::pair_basis(int i, int j) const {
  check_user(i, users());
  check_user(j, users());
  if (i == j) throw Error(ErrorCode::kInvalidInput, "pair needs two users");
  auto it = pair_bases_.find(ordered(i, j));
  return it == pair_bases_.end() ? empty_ : it->second;
}

int Strategy::pair_dim(int i, int j) const {
  return static_cast<int>(pair_basis(i, j).cols());
}

bool Strategy::has_default_layout() const {
  for (int i = 0; i < users(); ++i) {
    if (!std::is_sorted(layout_[i].begin(), layout_[i].end())) return false;
  }
  return true;
}

int Strategy::slot_offset(int user, int partner) const {
  check_user(user, users());
  int offset = 0;
  for (int j : layout_[user]) {
    if (j == partner) return offset;
    offset += pair_dim(user, j);
  }
  throw Error(ErrorCode::kInvalidInput, "not a partner of this user");
}

CMatrix Strategy::user_frame(int user) const {
  check_user(user, users());
  CMatrix frame(antennas(), spec_.dof[user]);
  Eigen::Index col = 0;
  for (int j : layout_[user]) {
    const CMatrix& b = pair_basis(user, j);
    frame.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  return frame;
}

Subspace Strategy::subspace(int user) const {
  return orthonormal_basis(user_frame(user));
}

std::vector<Subspace> Strategy::subspaces() const {
  std::vector<Subspace> out;
  out.reserve(users());
  for (int i = 0; i < users(); ++i) out.push_back(subspace(i));
  return out;
}

CMatrix Strategy::interference_frame(int user) const {
  check_user(user, users());
  Eigen::Index cols = 0;
  for (const auto& [key, b] : pair_bases_) {
    if (key.first != user && key.second != user) cols += b.cols();
  }
  CMatrix frame(antennas(), cols);
  Eigen::Index col = 0;
  for (const auto& [key, b] : pair_bases_) {
    if (key.first == user || key.second == user) continue;
    frame.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  return frame;
}

// ---------------------------------------------------------------------------

std::vector<std::string> VerificationReport::failures() const {
  std::vector<std::string> out;
  if (!dimensions.ok) out.emplace_back("(i)");
  if (!decomposition.ok) out.emplace_back("(ii)");
  if (!relay_space.ok) out.emplace_back("(iii)");
  if (worst_triple_dim > 0) out.emplace_back("triple");
  return out;
}

VerificationReport verify_strategy(std::span<const Subspace> candidate,
                                   int antennas, const Tolerance& tol,
                                   std::optional<std::span<const int>> expected_dims) {
  const int k = static_cast<int>(candidate.size());
  if (k < 2) throw Error(ErrorCode::kInvalidInput, "need at least 2 subspaces");
  for (const auto& v : candidate) {
    if (v.ambient_dim() != antennas) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "candidate subspace lives in C^" +
                      std::to_string(v.ambient_dim()) + ", expected C^" +
                      std::to_string(antennas));
    }
  }
  if (expected_dims && static_cast<int>(expected_dims->size()) != k) {
    throw Error(ErrorCode::kInvalidInput, "expected dims length mismatch");
  }

  VerificationReport report;

  // (i)
  auto& dims = report.dimensions;
  dims.ok = true;
  for (int i = 0; i < k; ++i) {
    const int d = candidate[i].dim();
    dims.measured.push_back(d);
    dims.total += d;
    if (d > antennas) dims.ok = false;
    if (expected_dims && (*expected_dims)[i] != d) dims.ok = false;
  }
  if (dims.total != 2 * antennas) dims.ok = false;

  // Pairwise intersections.
  std::map<PairKey, Subspace> pairs;
  report.pair_dims = PairTable(k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Subspace s = intersect(candidate[i], candidate[j], tol);
      report.pair_dims.set(i, j, s.dim());
      pairs.emplace(PairKey{i, j}, std::move(s));
    }
  }

  // (ii)
  auto& dec = report.decomposition;
  dec.ok = true;
  for (int i = 0; i < k; ++i) {
    std::vector<Subspace> parts;
    int sum = 0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const Subspace& s = pairs.at(ordered(i, j));
      sum += s.dim();
      parts.push_back(s);
    }
    dec.intersection_dim_sum.push_back(sum);
    const bool user_ok =
        sum == candidate[i].dim() && is_direct_sum(parts, tol);
    dec.per_user.push_back(user_ok);
    dec.ok = dec.ok && user_ok;
  }

  // (iii)
  std::vector<Subspace> all_pairs;
  all_pairs.reserve(pairs.size());
  for (const auto& [key, s] : pairs) {
    report.relay_space.pair_dim_total += s.dim();
    all_pairs.push_back(s);
  }
  report.relay_space.sum_dim = subspace_sum(all_pairs, tol).dim();
  report.relay_space.ok =
      report.relay_space.pair_dim_total == antennas &&
      report.relay_space.sum_dim == antennas;

  // Triple intersections.
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const Subspace& ij = pairs.at({i, j});
      if (ij.dim() == 0) continue;
      for (int l = j + 1; l < k; ++l) {
        const int t = intersect(ij, candidate[l], tol).dim();
        if (t > report.worst_triple_dim) {
          report.worst_triple_dim = t;
          report.worst_triple = {i, j, l};
        }
      }
    }
  }

  report.ok = dims.ok && dec.ok && report.relay_space.ok &&
              report.worst_triple_dim == 0;
  return report;
}

VerificationReport verify_strategy(const Strategy& strategy,
                                   const Tolerance& tol) {
  const auto subspaces = strategy.subspaces();
  return verify_strategy(subspaces, strategy.antennas(), tol,
                         std::span<const int>(strategy.spec().dof));
}

Strategy construct_strategy(const StrategySpec& spec) {
  if (!is_feasible_tuple(spec)) {
    throw Error(ErrorCode::kInfeasibleTuple,
                "tuple does not satisfy sum d_i = 2N, d_i <= N");
  }
  const int k = spec.users;
  const int n = spec.antennas;

  // Position m of the 2N-dimensional space folds onto coordinate m mod N.
  // Every coordinate is hit exactly twice; the two users hitting it share it.
  std::vector<std::vector<int>> owners(n);
  int position = 0;
  for (int i = 0; i < k; ++i) {
    for (int c = 0; c < spec.dof[i]; ++c, ++position) {
      owners[position % n].push_back(i);
    }
  }

  std::map<PairKey, std::vector<int>> shared;
  for (int coord = 0; coord < n; ++coord) {
    shared[ordered(owners[coord][0], owners[coord][1])].push_back(coord);
  }

  std::map<PairKey, CMatrix> bases;
  StrategySpec out_spec = spec;
  out_spec.pairwise = PairTable(k);
  for (const auto& [key, coords] : shared) {
    CMatrix b = CMatrix::Zero(n, static_cast<Eigen::Index>(coords.size()));
    for (std::size_t c = 0; c < coords.size(); ++c) {
      b(coords[c], static_cast<Eigen::Index>(c)) = 1.0;
    }
    out_spec.pairwise->set(key.first, key.second,
                           static_cast<int>(coords.size()));
    bases.emplace(key, std::move(b));
  }
  return Strategy(std::move(out_spec), std::move(bases));
}

Strategy three_user_worked_example() {
  const CMatrix id = CMatrix::Identity(3, 3);
  std::map<PairKey, CMatrix> bases{
      {{0, 1}, id.col(1)},
      {{0, 2}, id.col(0)},
      {{1, 2}, id.col(2)},
  };
  return Strategy(uniform_spec(3, 3, 2), std::move(bases),
                  Strategy::Layout{{2, 1}, {0, 2}, {1, 0}});
}

std::vector<Subspace> sample_generic_strategy(const StrategySpec& spec,
                                              Rng& rng) {
  spec.validate();
  std::vector<Subspace> out;
  out.reserve(spec.users);
  for (int d : spec.dof) {
    if (d > spec.antennas) {
      throw Error(ErrorCode::kInvalidInput, "d_i exceeds N");
    }
    out.push_back(random_subspace(spec.antennas, d, rng));
  }
  return out;
}

Strategy strategy_from_pairwise(const StrategySpec& spec, Rng& rng) {
  if (!spec.pairwise) {
    throw Error(ErrorCode::kInconsistentPairwise, "spec has no pairwise table");
  }
  if (!is_feasible_tuple(spec)) {
    throw Error(ErrorCode::kInfeasibleTuple,
                "tuple does not satisfy sum d_i = 2N, d_i <= N");
  }
  const int k = spec.users;
  const int n = spec.antennas;
  for (int attempt = 0; attempt < kMaxPairwiseResamples; ++attempt) {
    std::map<PairKey, CMatrix> bases;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        const int dij = spec.pairwise->at(i, j);
        if (dij == 0) continue;
        bases.emplace(PairKey{i, j}, random_subspace(n, dij, rng).basis());
      }
    }
    Strategy s(spec, std::move(bases));
    if (verify_strategy(s).ok) return s;
  }
  throw Error(ErrorCode::kResampleExhausted,
              "no verified strategy after " +
                  std::to_string(kMaxPairwiseResamples) + " draws");
}

// ---------------------------------------------------------------------------

std::int64_t feasible_variety_dim(const StrategySpec& spec) {
  if (!spec.pairwise) {
    throw Error(ErrorCode::kInconsistentPairwise, "spec has no pairwise table");
  }
  spec.validate();
  const PairTable& t = *spec.pairwise;
  std::int64_t dim = 0;
  for (int i = 0; i < spec.users; ++i) {
    for (int j = i + 1; j < spec.users; ++j) {
      const std::int64_t dij = t.at(i, j);
      if (dij > spec.antennas) {
        throw Error(ErrorCode::kInconsistentPairwise, "d_ij exceeds N");
      }
      dim += dij * (spec.antennas - dij);
    }
  }
  return dim;
}

PairTable symmetric_pairwise_table(int users, int antennas) {
  if (users < 2 || antennas < 1) {
    throw Error(ErrorCode::kInvalidInput, "need K >= 2 and N >= 1");
  }
  const int denom = users * (users - 1);
  if ((2 * antennas) % denom != 0) {
    throw Error(ErrorCode::kInconsistentPairwise,
                "d/(K-1) = 2N/(K(K-1)) is not an integer");
  }
  PairTable t(users);
  for (int i = 0; i < users; ++i) {
    for (int j = i + 1; j < users; ++j) t.set(i, j, 2 * antennas / denom);
  }
  return t;
}

PairTable paired_table(int users, int antennas) {
  if (users < 2 || antennas < 1 || users % 2 != 0) {
    throw Error(ErrorCode::kInvalidInput, "pairing needs an even K >= 2");
  }
  if ((2 * antennas) % users != 0) {
    throw Error(ErrorCode::kInconsistentPairwise,
                "d = 2N/K is not an integer");
  }
  PairTable t(users);
  for (int i = 0; i + 1 < users; i += 2) t.set(i, i + 1, 2 * antennas / users);
  return t;
}

std::int64_t symmetric_pairwise_dim_closed_form(int users, int antennas) {
  symmetric_pairwise_table(users, antennas);
  const std::int64_t n2 = static_cast<std::int64_t>(antennas) * antennas;
  const std::int64_t kk = static_cast<std::int64_t>(users) * (users - 1);
  return n2 * (kk - 2) / kk;
}

std::int64_t paired_dim_closed_form(int users, int antennas) {
  paired_table(users, antennas);
  const std::int64_t n2 = static_cast<std::int64_t>(antennas) * antennas;
  return n2 * (users - 2) / users;
}

GenericityResult generic_feasibility_rate(const StrategySpec& spec, int trials,
                                          std::uint64_t seed,
                                          const Tolerance& tol) {
  if (trials < 1) throw Error(ErrorCode::kInvalidInput, "trials must be >= 1");
  spec.validate();
  GenericityResult result;
  result.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(t)});
    const auto candidate = sample_generic_strategy(spec, rng);
    if (verify_strategy(candidate, spec.antennas, tol,
                        std::span<const int>(spec.dof))
            .ok) {
      ++result.passes;
    }
  }
  return result;
}

}  // namespace relay_align
