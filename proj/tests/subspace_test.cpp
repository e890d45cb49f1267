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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "relay_align/error.hpp"
#include "relay_align/seeding.hpp"
#include "relay_align/subspace.hpp"

namespace relay_align {
namespace {

CMatrix coord(int n, std::initializer_list<int> idx) {
  CMatrix m = CMatrix::Zero(n, static_cast<Eigen::Index>(idx.size()));
  int c = 0;
  for (int i : idx) m(i, c++) = 1.0;
  return m;
}

bool is_orthonormal(const CMatrix& b, double tol = 1e-10) {
  const CMatrix g = b.adjoint() * b;
  return (g - CMatrix::Identity(b.cols(), b.cols())).norm() < tol;
}

TEST(NumericRank, DetectsDependentColumns) {
  CMatrix m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  EXPECT_EQ(numeric_rank(m), 2);
  EXPECT_EQ(numeric_rank(CMatrix::Identity(4, 4)), 4);
  EXPECT_EQ(numeric_rank(CMatrix::Zero(3, 2)), 0);
}

TEST(NumericRank, ThresholdAddsFloorToRelativeTerm) {
  Tolerance tol;
  const double eps = std::numeric_limits<double>::epsilon();
  EXPECT_DOUBLE_EQ(tol.rank_threshold(4, 2, 3.0), 4 * eps * 3.0 * 100.0 + 1e-12);
  CMatrix tiny = CMatrix::Identity(2, 2) * 1e-13;
  EXPECT_EQ(numeric_rank(tiny), 0);
}

TEST(Tolerance, RejectsNegativeValues) {
  Tolerance tol{-1.0, 1e-12};
  EXPECT_THROW(tol.validate(), Error);
}

TEST(Subspace, FromOrthonormalChecksColumns) {
  EXPECT_NO_THROW(Subspace::from_orthonormal(coord(3, {0, 2})));
  CMatrix bad = coord(3, {0, 2});
  bad(1, 0) = 1.0;
  EXPECT_THROW(Subspace::from_orthonormal(bad), Error);
}

TEST(Subspace, ZeroAndFull) {
  EXPECT_EQ(Subspace::zero(4).dim(), 0);
  EXPECT_EQ(Subspace::zero(4).ambient_dim(), 4);
  EXPECT_EQ(Subspace::full(4).dim(), 4);
  EXPECT_TRUE(Subspace::full(4).contains(CVector::Ones(4)));
}

TEST(Subspace, ContainsUsesProjection) {
  const Subspace s = Subspace::from_orthonormal(coord(3, {0, 1}));
  CVector in(3), out(3);
  in << Complex(1, 2), Complex(0, -1), 0;
  out << 0, 0, 1;
  EXPECT_TRUE(s.contains(in));
  EXPECT_FALSE(s.contains(out));
}

TEST(OrthonormalBasis, SpansInputColumns) {
  Rng rng(3);
  const CMatrix a = complex_gaussian(5, 2, rng);
  CMatrix cols(5, 3);
  cols << a, a.col(0) * Complex(2, -1) + a.col(1);
  const Subspace s = orthonormal_basis(cols);
  EXPECT_EQ(s.dim(), 2);
  EXPECT_TRUE(is_orthonormal(s.basis()));
  for (int c = 0; c < 3; ++c) EXPECT_TRUE(s.contains(cols.col(c)));
}

TEST(Intersect, CoordinatePlanes) {
  const Subspace a = Subspace::from_orthonormal(coord(3, {0, 1}));
  const Subspace b = Subspace::from_orthonormal(coord(3, {1, 2}));
  const Subspace c = intersect(a, b);
  ASSERT_EQ(c.dim(), 1);
  EXPECT_NEAR(projector_distance(c, Subspace::from_orthonormal(coord(3, {1}))), 0.0, 1e-12);
}

TEST(Intersect, GenericDimensionFormula) {
  // dim(A ∩ B) = max(0, a + b - N) for random subspaces.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng = make_rng(seed, {});
    const int n = 2 + static_cast<int>(seed % 6);
    const int a = 1 + static_cast<int>(rng() % n);
    const int b = 1 + static_cast<int>(rng() % n);
    const Subspace sa = random_subspace(n, a, rng);
    const Subspace sb = random_subspace(n, b, rng);
    const Subspace c = intersect(sa, sb);
    EXPECT_EQ(c.dim(), std::max(0, a + b - n)) << "n=" << n << " a=" << a << " b=" << b;
    for (int k = 0; k < c.dim(); ++k) {
      EXPECT_TRUE(sa.contains(c.basis().col(k)));
      EXPECT_TRUE(sb.contains(c.basis().col(k)));
    }
  }
}

TEST(Intersect, SharedLineIsFound) {
  Rng rng(11);
  const CMatrix common = complex_gaussian(4, 1, rng);
  CMatrix a(4, 2), b(4, 2);
  a << common, complex_gaussian(4, 1, rng);
  b << complex_gaussian(4, 1, rng), common * Complex(0.3, 2.0);
  const Subspace c = intersect(orthonormal_basis(a), orthonormal_basis(b));
  ASSERT_EQ(c.dim(), 1);
  EXPECT_NEAR(projector_distance(c, orthonormal_basis(common)), 0.0, 1e-10);
}

TEST(Intersect, RejectsMismatchedAmbient) {
  try {
    intersect(Subspace::full(3), Subspace::full(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Intersect, WithZeroSubspace) {
  EXPECT_EQ(intersect(Subspace::zero(3), Subspace::full(3)).dim(), 0);
}

TEST(SubspaceSum, DirectAndNonDirect) {
  const std::vector<Subspace> direct{Subspace::from_orthonormal(coord(3, {0})),
                                     Subspace::from_orthonormal(coord(3, {1, 2}))};
  EXPECT_EQ(subspace_sum(direct).dim(), 3);
  EXPECT_TRUE(is_direct_sum(direct));
  const std::vector<Subspace> overlap{Subspace::from_orthonormal(coord(3, {0, 1})),
                                      Subspace::from_orthonormal(coord(3, {1, 2}))};
  EXPECT_EQ(subspace_sum(overlap).dim(), 3);
  EXPECT_FALSE(is_direct_sum(overlap));
}

TEST(ProjectOntoPerp, ResultIsOrthogonal) {
  Rng rng(5);
  const Subspace s = random_subspace(5, 2, rng);
  const CMatrix x = complex_gaussian(5, 3, rng);
  const CMatrix p = project_onto_perp(x, s);
  EXPECT_LT((s.basis().adjoint() * p).norm(), 1e-12);
  EXPECT_LT((p - (CMatrix::Identity(5, 5) - s.projector()) * x).norm(), 1e-12);
}

TEST(OrthogonalComplement, DimensionsAndOrthogonality) {
  Rng rng(8);
  for (int d = 0; d <= 4; ++d) {
    const Subspace s = d == 0 ? Subspace::zero(4) : random_subspace(4, d, rng);
    const Subspace c = orthogonal_complement(s);
    EXPECT_EQ(c.dim(), 4 - d);
    if (d > 0 && d < 4) EXPECT_LT((s.basis().adjoint() * c.basis()).norm(), 1e-12);
  }
}

TEST(ProjectorDistance, InvariantUnderBasisChange) {
  Rng rng(21);
  const Subspace s = random_subspace(4, 2, rng);
  const CMatrix mix = complex_gaussian(2, 2, rng);
  EXPECT_NEAR(projector_distance(s, orthonormal_basis(s.basis() * mix)), 0.0, 1e-12);
  EXPECT_GT(projector_distance(s, random_subspace(4, 2, rng)), 1e-3);
}

TEST(ComplexGaussian, UnitVarianceCircular) {
  Rng rng(1);
  const CMatrix g = complex_gaussian(200, 200, rng);
  const double n = static_cast<double>(g.size());
  const double power = g.squaredNorm() / n;
  const double re_power = g.real().squaredNorm() / n;
  const Complex pseudo = (g.array() * g.array()).sum() / n;
  EXPECT_NEAR(power, 1.0, 0.02);
  EXPECT_NEAR(re_power, 0.5, 0.02);
  EXPECT_LT(std::abs(pseudo), 0.02);
}

TEST(RandomSubspace, OrthonormalAndSeeded) {
  Rng a(9), b(9);
  const Subspace s = random_subspace(6, 3, a);
  EXPECT_EQ(s.dim(), 3);
  EXPECT_TRUE(is_orthonormal(s.basis()));
  EXPECT_EQ(s.basis(), random_subspace(6, 3, b).basis());
}

TEST(Seeding, DerivedStreamsDiffer) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {0}), derive_seed(2, {0}));
}

}  // namespace
}  // namespace relay_align
