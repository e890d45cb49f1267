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

#include "relay_align/variety.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Eigenvalues>

#include "relay_align/error.hpp"

namespace relay_align {
namespace {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void combine(int n, int d, int start, std::vector<int>& current,
             std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == d) {
    out.push_back(current);
    return;
  }
  for (int v = start; v < n; ++v) {
    current.push_back(v);
    combine(n, d, v + 1, current, out);
    current.pop_back();
  }
}

// Rotates v so that its first coordinate above `floor` is real positive.
void fix_phase(CVector& v, double floor) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > floor) {
      v *= std::conj(v[i]) / mag;
      v[i] = Complex(v[i].real(), 0.0);
      return;
    }
  }
}

constexpr double kPhaseFloor = 1e-8;
constexpr double kPolynomialZeroTol = 1e-12;

}  // namespace

std::vector<std::vector<int>> sorted_subsets(int n, int d) {
  std::vector<std::vector<int>> out;
  if (d < 0 || d > n) return out;
  std::vector<int> current;
  combine(n, d, 0, current, out);
  return out;
}

std::size_t subset_rank(int n, const std::vector<int>& subset) {
  const int d = static_cast<int>(subset.size());
  std::int64_t rank = 0;
  int prev = -1;
  for (int k = 0; k < d; ++k) {
    for (int v = prev + 1; v < subset[k]; ++v) {
      rank += binomial(n - v - 1, d - k - 1);
    }
    prev = subset[k];
  }
  return static_cast<std::size_t>(rank);
}

PluckerPoint PluckerPoint::from_coords(int n, int d, CVector coords) {
  if (d < 1 || d > n) {
    throw Error(ErrorCode::kInvalidInput, "Plücker point needs 1 <= d <= n");
  }
  if (coords.size() != binomial(n, d)) {
    throw Error(ErrorCode::kInvalidInput, "coordinate vector length is not C(n, d)");
  }
  const double norm = coords.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kInvalidInput, "Plücker coordinates must be nonzero");
  }
  coords /= norm;
  fix_phase(coords, kPhaseFloor);
  return PluckerPoint{n, d, std::move(coords)};
}

double PluckerPoint::distance(const PluckerPoint& other) const {
  if (n != other.n || d != other.d) {
    throw Error(ErrorCode::kDimensionMismatch, "Plücker points of different G(d,n)");
  }
  return (coords - other.coords).norm();
}

PluckerPoint plucker(const Subspace& s) {
  const int n = s.ambient_dim();
  const int d = s.dim();
  if (d == 0) {
    throw Error(ErrorCode::kInvalidInput, "zero subspace has no Plücker point");
  }
  const auto subsets = sorted_subsets(n, d);
  CVector coords(static_cast<Eigen::Index>(subsets.size()));
  CMatrix minor(d, d);
  for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
    for (int r = 0; r < d; ++r) minor.row(r) = s.basis().row(subsets[idx][r]);
    coords[static_cast<Eigen::Index>(idx)] = minor.determinant();
  }
  return PluckerPoint::from_coords(n, d, std::move(coords));
}

double plucker_residual(int n, int d, const CVector& coords) {
  if (d < 1 || d > n || coords.size() != binomial(n, d)) {
    throw Error(ErrorCode::kInvalidInput, "coordinate vector does not match G(d, n)");
  }
  const auto small = sorted_subsets(n, d - 1);
  const auto large = sorted_subsets(n, d + 1);
  double worst = 0.0;
  std::vector<int> merged;
  std::vector<int> rest;
  for (const auto& i_set : small) {
    for (const auto& j_set : large) {
      Complex sum = 0.0;
      for (int k = 0; k <= d; ++k) {
        const int j = j_set[k];
        if (std::find(i_set.begin(), i_set.end(), j) != i_set.end()) continue;
        // p[I + j]: sign of the sort that moves j into place.
        int larger = 0;
        merged = i_set;
        for (int v : i_set) larger += v > j ? 1 : 0;
        merged.insert(std::upper_bound(merged.begin(), merged.end(), j), j);
        const double sign_merge = larger % 2 == 0 ? 1.0 : -1.0;

        rest.clear();
        for (int v : j_set) {
          if (v != j) rest.push_back(v);
        }
        const double sign_k = k % 2 == 0 ? 1.0 : -1.0;
        sum += sign_k * sign_merge *
               coords[static_cast<Eigen::Index>(subset_rank(n, merged))] *
               coords[static_cast<Eigen::Index>(subset_rank(n, rest))];
      }
      worst = std::max(worst, std::abs(sum));
    }
  }
  return worst;
}

bool check_plucker_relations(const PluckerPoint& p, double tol) {
  return plucker_residual(p.n, p.d, p.coords) <= tol;
}

int triple_intersection_dim(const Subspace& v1, const Subspace& v2,
                            const Subspace& v3, const Tolerance& tol) {
  if (v1.ambient_dim() != v2.ambient_dim() ||
      v1.ambient_dim() != v3.ambient_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "triple intersection needs equal ambient dimensions");
  }
  return intersect(intersect(v1, v2, tol), v3, tol).dim();
}

CVector perp_line(const Subspace& plane) {
  if (plane.ambient_dim() != 3 || plane.dim() != 2) {
    throw Error(ErrorCode::kInvalidInput, "expected a plane in C^3");
  }
  CVector w = orthogonal_complement(plane).basis().col(0);
  fix_phase(w, kPhaseFloor);
  return w;
}

Complex det3(const CVector& c0, const CVector& c1, const CVector& c2) {
  return c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) -
         c1[0] * (c0[1] * c2[2] - c0[2] * c2[1]) +
         c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]);
}

Complex determinantal_test(const Subspace& v1, const Subspace& v2,
                           const Subspace& v3) {
  return det3(perp_line(v1), perp_line(v2), perp_line(v3));
}

Complex LineProbe::evaluate(Complex t) const {
  return ((coefficients[3] * t + coefficients[2]) * t + coefficients[1]) * t +
         coefficients[0];
}

LineProbe probe_line(const std::array<CVector, 3>& base,
                     const std::array<CVector, 3>& direction) {
  for (int i = 0; i < 3; ++i) {
    if (base[i].size() != 3 || direction[i].size() != 3) {
      throw Error(ErrorCode::kInvalidInput, "line probe works in C^3");
    }
  }
  LineProbe probe;
  probe.base = base;
  probe.direction = direction;

  // Multilinearity: the t^k coefficient sums the determinants with exactly
  // k columns taken from the direction vectors.
  double scale = 1.0;
  for (int i = 0; i < 3; ++i) scale *= base[i].norm() + direction[i].norm();
  for (int mask = 0; mask < 8; ++mask) {
    const CVector& c0 = (mask & 1) ? direction[0] : base[0];
    const CVector& c1 = (mask & 2) ? direction[1] : base[1];
    const CVector& c2 = (mask & 4) ? direction[2] : base[2];
    probe.coefficients[std::popcount(static_cast<unsigned>(mask))] +=
        det3(c0, c1, c2);
  }

  double largest = 0.0;
  for (const auto& c : probe.coefficients) largest = std::max(largest, std::abs(c));
  if (largest <= kPolynomialZeroTol * scale) {
    probe.identically_zero = true;
    return probe;
  }
  probe.degree = 0;
  for (int k = 3; k >= 1; --k) {
    if (std::abs(probe.coefficients[k]) > kPolynomialZeroTol * largest) {
      probe.degree = k;
      break;
    }
  }
  if (probe.degree == 0) return probe;

  const int deg = probe.degree;
  CMatrix companion = CMatrix::Zero(deg, deg);
  for (int r = 1; r < deg; ++r) companion(r, r - 1) = 1.0;
  for (int r = 0; r < deg; ++r) {
    companion(r, deg - 1) = -probe.coefficients[r] / probe.coefficients[deg];
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(companion);
  for (Eigen::Index r = 0; r < deg; ++r) probe.roots.push_back(solver.eigenvalues()[r]);

  for (const Complex& t : probe.roots) {
    std::array<CVector, 3> w;
    double norms = 1.0;
    for (int i = 0; i < 3; ++i) {
      w[i] = base[i] + t * direction[i];
      norms *= w[i].norm();
    }
    const double residual = norms > 0.0 ? std::abs(det3(w[0], w[1], w[2])) / norms
                                        : 0.0;
    probe.max_root_residual = std::max(probe.max_root_residual, residual);

    std::array<Subspace, 3> planes;
    bool degenerate = false;
    for (int i = 0; i < 3; ++i) {
      const Subspace line = orthonormal_basis(w[i]);
      if (line.dim() != 1) {
        degenerate = true;
        break;
      }
      planes[i] = orthogonal_complement(line);
    }
    probe.triple_dim_at_roots.push_back(
        degenerate ? -1 : triple_intersection_dim(planes[0], planes[1], planes[2]));
  }
  return probe;
}

LineProbeReport codim_line_probe(Rng& rng, int samples) {
  if (samples < 0) throw Error(ErrorCode::kInvalidInput, "negative sample count");
  LineProbeReport report;
  for (int s = 0; s < samples; ++s) {
    std::array<CVector, 3> base;
    std::array<CVector, 3> direction;
    for (int i = 0; i < 3; ++i) {
      base[i] = complex_gaussian(3, 1, rng).col(0);
      direction[i] = complex_gaussian(3, 1, rng).col(0);
    }
    LineProbe probe = probe_line(base, direction);
    if (!probe.roots.empty()) ++report.lines_with_root;
    report.lines.push_back(std::move(probe));
  }
  return report;
}

}  // namespace relay_align
