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

#ifndef RELAY_ALIGN_VARIETY_HPP
#define RELAY_ALIGN_VARIETY_HPP

#include <array>
#include <vector>

#include "relay_align/subspace.hpp"

namespace relay_align {

// Sorted d-subsets of {0..n-1} in lexicographic order; the index of a subset
// in this list is its Plücker coordinate index.
std::vector<std::vector<int>> sorted_subsets(int n, int d);
// Inverse of sorted_subsets for a strictly increasing subset.
std::size_t subset_rank(int n, const std::vector<int>& subset);

/// Projective point of the Plücker embedding of G(d, n): unit norm, first
/// nonzero coordinate real and positive.
struct PluckerPoint {
  int n = 0;
  int d = 0;
  CVector coords;

  // Normalizes an arbitrary nonzero coordinate vector of length C(n, d).
  static PluckerPoint from_coords(int n, int d, CVector coords);

  double distance(const PluckerPoint& other) const;
};

PluckerPoint plucker(const Subspace& s);

// Largest modulus over all Grassmann-Plücker relations
//   sum_k (-1)^k p[I + j_k] p[J - j_k],  |I| = d-1, |J| = d+1,
// evaluated on raw (unnormalized) coordinates.
double plucker_residual(int n, int d, const CVector& coords);
bool check_plucker_relations(const PluckerPoint& p, double tol = 1e-9);

int triple_intersection_dim(const Subspace& v1, const Subspace& v2,
                            const Subspace& v3, const Tolerance& tol = {});

inline constexpr double kDeterminantZeroThreshold = 1e-8;

// Unit vector spanning the orthogonal complement of a plane in C^3, with its
// first nonzero coordinate real positive.
CVector perp_line(const Subspace& plane);

// det[w1 w2 w3] for the perp lines of three planes in C^3. Vanishes exactly
// when the planes share a common line.
Complex determinantal_test(const Subspace& v1, const Subspace& v2,
                           const Subspace& v3);

// Determinant of the 3x3 matrix with the given columns (no conjugation).
Complex det3(const CVector& c0, const CVector& c1, const CVector& c2);

/// det(t) along the line t -> (w_i + t u_i), i = 1..3, in the perp-line
/// chart of G(2,3)^3.
struct LineProbe {
  std::array<CVector, 3> base;
  std::array<CVector, 3> direction;
  std::array<Complex, 4> coefficients{};  // c0 + c1 t + c2 t^2 + c3 t^3
  bool identically_zero = false;
  int degree = 0;
  std::vector<Complex> roots;
  // max over roots of |det(t*)| / prod |w_i(t*)|
  double max_root_residual = 0.0;
  // dim(V1(t*) ∩ V2(t*) ∩ V3(t*)) at each root
  std::vector<int> triple_dim_at_roots;

  Complex evaluate(Complex t) const;
};

LineProbe probe_line(const std::array<CVector, 3>& base,
                     const std::array<CVector, 3>& direction);

struct LineProbeReport {
  std::vector<LineProbe> lines;
  int lines_with_root = 0;
};

// `samples` random lines with i.i.d. complex Gaussian base points and
// directions.
LineProbeReport codim_line_probe(Rng& rng, int samples);

}  // namespace relay_align

#endif  // RELAY_ALIGN_VARIETY_HPP
