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

#ifndef RELAY_ALIGN_SUBSPACE_HPP
#define RELAY_ALIGN_SUBSPACE_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace relay_align {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

// Rank decisions: a singular value counts iff
//   sigma > max(rows, cols) * eps * sigma_max * rel_rank_tol + abs_floor.
struct Tolerance {
  double rel_rank_tol = 100.0;
  double abs_floor = 1e-12;

  void validate() const;
  double rank_threshold(Eigen::Index rows, Eigen::Index cols,
                        double sigma_max) const;
};

// Numeric rank of an arbitrary complex matrix under `tol`.
int numeric_rank(const CMatrix& m, const Tolerance& tol = {});

/// A d-dimensional subspace of C^N, stored as an N x d matrix with
/// orthonormal columns. d = 0 is a valid value with an empty basis.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(int ambient_dim);
  static Subspace full(int ambient_dim);
  // Adopts `basis` as-is after checking orthonormality to 1e-10.
  static Subspace from_orthonormal(CMatrix basis);

  int ambient_dim() const noexcept { return ambient_dim_; }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const CMatrix& basis() const noexcept { return basis_; }

  // basis * basis^H
  CMatrix projector() const;
  bool contains(const CVector& v, double tol = 1e-9) const;

 private:
  Subspace(int ambient_dim, CMatrix basis)
      : ambient_dim_(ambient_dim), basis_(std::move(basis)) {}

  int ambient_dim_ = 0;
  CMatrix basis_;
};

// Column space of `cols`, orthonormalized through the SVD.
Subspace orthonormal_basis(const CMatrix& cols, const Tolerance& tol = {});

// span(a) ∩ span(b): nullspace of [A | -B], mapped back through A.
Subspace intersect(const Subspace& a, const Subspace& b,
                   const Tolerance& tol = {});

Subspace subspace_sum(std::span<const Subspace> parts,
                      const Tolerance& tol = {});

// dim(sum) == sum of dims.
bool is_direct_sum(std::span<const Subspace> parts, const Tolerance& tol = {});

// (I - P_S) x, column by column.
CMatrix project_onto_perp(const CMatrix& x, const Subspace& s);

Subspace orthogonal_complement(const Subspace& s, const Tolerance& tol = {});

// Frobenius distance between projectors; zero iff same subspace.
double projector_distance(const Subspace& a, const Subspace& b);

// N x cols matrix of i.i.d. standard circularly-symmetric complex Gaussians
// (real and imaginary parts each with variance 1/2).
CMatrix complex_gaussian(int rows, int cols, Rng& rng);

// Haar-distributed d-dimensional subspace of C^N.
Subspace random_subspace(int ambient_dim, int dim, Rng& rng);

}  // namespace relay_align

#endif  // RELAY_ALIGN_SUBSPACE_HPP
