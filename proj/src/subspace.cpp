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

#include "relay_align/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relay_align/error.hpp"

namespace relay_align {
namespace {

constexpr double kOrthonormalTol = 1e-10;

int count_above(const Eigen::VectorXd& sigma, double threshold) {
  int r = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > threshold) ++r;
  }
  return r;
}

void require_same_ambient(int a, int b, const char* where) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(where) + ": ambient dimensions " +
                    std::to_string(a) + " and " + std::to_string(b));
  }
}

CMatrix concatenate(std::span<const Subspace> parts, int ambient) {
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.dim();
  CMatrix out(ambient, total);
  Eigen::Index col = 0;
  for (const auto& p : parts) {
    out.middleCols(col, p.dim()) = p.basis();
    col += p.dim();
  }
  return out;
}

int common_ambient(std::span<const Subspace> parts, const char* where) {
  if (parts.empty()) {
    throw Error(ErrorCode::kInvalidInput, std::string(where) + ": empty list");
  }
  const int n = parts.front().ambient_dim();
  for (const auto& p : parts) require_same_ambient(n, p.ambient_dim(), where);
  return n;
}

}  // namespace

void Tolerance::validate() const {
  if (!std::isfinite(rel_rank_tol) || !std::isfinite(abs_floor) ||
      rel_rank_tol < 0.0 || abs_floor < 0.0) {
    throw Error(ErrorCode::kInvalidInput,
                "tolerance fields must be finite and non-negative");
  }
}

double Tolerance::rank_threshold(Eigen::Index rows, Eigen::Index cols,
                                 double sigma_max) const {
  const double eps = std::numeric_limits<double>::epsilon();
  return static_cast<double>(std::max(rows, cols)) * eps * sigma_max *
             rel_rank_tol +
         abs_floor;
}

int numeric_rank(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sigma = svd.singularValues();
  return count_above(sigma, tol.rank_threshold(m.rows(), m.cols(), sigma[0]));
}

Subspace Subspace::zero(int ambient_dim) {
  if (ambient_dim < 1) {
    throw Error(ErrorCode::kInvalidInput, "ambient dimension must be >= 1");
  }
  return Subspace(ambient_dim, CMatrix(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
  if (ambient_dim < 1) {
    throw Error(ErrorCode::kInvalidInput, "ambient dimension must be >= 1");
  }
  return Subspace(ambient_dim, CMatrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_orthonormal(CMatrix basis) {
  const auto n = basis.rows();
  if (n < 1 || basis.cols() > n) {
    throw Error(ErrorCode::kInvalidInput, "basis must be N x d with d <= N");
  }
  if (!basis.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "basis has non-finite entries");
  }
  const auto d = basis.cols();
  const double err =
      (basis.adjoint() * basis - CMatrix::Identity(d, d)).norm();
  if (err > kOrthonormalTol) {
    throw Error(ErrorCode::kInvalidInput,
                "basis columns are not orthonormal (error " +
                    std::to_string(err) + ")");
  }
  return Subspace(static_cast<int>(n), std::move(basis));
}

CMatrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

bool Subspace::contains(const CVector& v, double tol) const {
  if (v.size() != ambient_dim_) return false;
  const CVector residual = v - basis_ * (basis_.adjoint() * v);
  return residual.norm() <= tol * std::max(1.0, v.norm());
}

Subspace orthonormal_basis(const CMatrix& cols, const Tolerance& tol) {
  tol.validate();
  if (cols.rows() < 1) {
    throw Error(ErrorCode::kInvalidInput, "ambient dimension must be >= 1");
  }
  if (!cols.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "matrix has non-finite entries");
  }
  const int n = static_cast<int>(cols.rows());
  if (cols.cols() == 0) return Subspace::zero(n);

  Eigen::JacobiSVD<CMatrix> svd(cols, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const int r =
      count_above(sigma, tol.rank_threshold(cols.rows(), cols.cols(), sigma[0]));
  return Subspace::from_orthonormal(svd.matrixU().leftCols(r));
}

Subspace intersect(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  require_same_ambient(a.ambient_dim(), b.ambient_dim(), "intersect");
  const int n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(n);

  const Eigen::Index cols = a.dim() + b.dim();
  CMatrix stacked(n, cols);
  stacked << a.basis(), -b.basis();

  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const int rank =
      count_above(sigma, tol.rank_threshold(n, cols, sigma[0]));
  const Eigen::Index nullity = cols - rank;
  if (nullity == 0) return Subspace::zero(n);

  const CMatrix null_vectors = svd.matrixV().rightCols(nullity);
  return orthonormal_basis(a.basis() * null_vectors.topRows(a.dim()), tol);
}

Subspace subspace_sum(std::span<const Subspace> parts, const Tolerance& tol) {
  const int n = common_ambient(parts, "subspace_sum");
  return orthonormal_basis(concatenate(parts, n), tol);
}

bool is_direct_sum(std::span<const Subspace> parts, const Tolerance& tol) {
  const int n = common_ambient(parts, "is_direct_sum");
  int total = 0;
  for (const auto& p : parts) total += p.dim();
  if (total > n) return false;
  return numeric_rank(concatenate(parts, n), tol) == total;
}

CMatrix project_onto_perp(const CMatrix& x, const Subspace& s) {
  require_same_ambient(static_cast<int>(x.rows()), s.ambient_dim(),
                       "project_onto_perp");
  if (s.dim() == 0) return x;
  return x - s.basis() * (s.basis().adjoint() * x);
}

Subspace orthogonal_complement(const Subspace& s, const Tolerance& tol) {
  const int n = s.ambient_dim();
  if (s.dim() == 0) return Subspace::full(n);
  if (s.dim() == n) return Subspace::zero(n);
  Eigen::JacobiSVD<CMatrix> svd(s.basis(), Eigen::ComputeFullU);
  const auto& sigma = svd.singularValues();
  const int r =
      count_above(sigma, tol.rank_threshold(n, s.dim(), sigma[0]));
  return Subspace::from_orthonormal(svd.matrixU().rightCols(n - r));
}

double projector_distance(const Subspace& a, const Subspace& b) {
  require_same_ambient(a.ambient_dim(), b.ambient_dim(), "projector_distance");
  return (a.projector() - b.projector()).norm();
}

CMatrix complex_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

Subspace random_subspace(int ambient_dim, int dim, Rng& rng) {
  if (dim < 0 || dim > ambient_dim) {
    throw Error(ErrorCode::kInvalidInput,
                "subspace dimension must lie in [0, ambient_dim]");
  }
  if (dim == 0) return Subspace::zero(ambient_dim);
  for (;;) {
    Subspace s = orthonormal_basis(complex_gaussian(ambient_dim, dim, rng));
    if (s.dim() == dim) return s;
  }
}

}  // namespace relay_align
