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

#include "relay_align/relay_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "relay_align/error.hpp"

namespace relay_align {
namespace {

constexpr double kSumMergeTol = 1e-9;

void check_channels(const Strategy& strategy, const ChannelSet& channels) {
  if (channels.users != strategy.users() ||
      channels.antennas != strategy.antennas() ||
      static_cast<int>(channels.uplink.size()) != channels.users ||
      static_cast<int>(channels.downlink.size()) != channels.users) {
    throw Error(ErrorCode::kDimensionMismatch,
                "channel set does not match the strategy shape");
  }
}

Subspace interference_image(int user, const Strategy& strategy,
                            const ChannelSet& channels) {
  return orthonormal_basis(channels.downlink[user] *
                           strategy.interference_frame(user));
}

CMatrix perp_projector(const Subspace& s) {
  const int n = s.ambient_dim();
  return CMatrix::Identity(n, n) - s.projector();
}

CMatrix draw_conditioned(int antennas, Rng& rng, int& redraws,
                         double& worst) {
  for (;;) {
    CMatrix m = complex_gaussian(antennas, antennas, rng);
    const double cond = condition_number(m);
    if (cond <= kMaxChannelCondition) {
      worst = std::max(worst, cond);
      return m;
    }
    ++redraws;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

double condition_number(const CMatrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sigma = svd.singularValues();
  const double smin = sigma[sigma.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sigma[0] / smin;
}

ChannelSet draw_channels(int users, int antennas, Rng& rng) {
  if (users < 2 || antennas < 1) {
    throw Error(ErrorCode::kInvalidInput, "need K >= 2 users and N >= 1");
  }
  ChannelSet c;
  c.users = users;
  c.antennas = antennas;
  for (int i = 0; i < users; ++i) {
    c.uplink.push_back(draw_conditioned(antennas, rng, c.redraws, c.worst_condition));
  }
  for (int k = 0; k < users; ++k) {
    c.downlink.push_back(
        draw_conditioned(antennas, rng, c.redraws, c.worst_condition));
  }
  return c;
}

ChannelSet identity_channels(int users, int antennas) {
  ChannelSet c;
  c.users = users;
  c.antennas = antennas;
  c.uplink.assign(users, CMatrix::Identity(antennas, antennas));
  c.downlink.assign(users, CMatrix::Identity(antennas, antennas));
  c.worst_condition = 1.0;
  return c;
}

// ---------------------------------------------------------------------------

Constellation Constellation::qpsk() {
  return from_points({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
}

Constellation Constellation::bpsk() { return from_points({{1, 0}, {-1, 0}}); }

Constellation Constellation::from_points(std::vector<Complex> points) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidInput, "constellation must be nonempty");
  }
  double scale = 0.0;
  Complex mean = 0.0;
  for (const auto& p : points) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw Error(ErrorCode::kInvalidInput, "constellation point is not finite");
    }
    scale = std::max(scale, std::abs(p));
    mean += p;
  }
  mean /= static_cast<double>(points.size());
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      if (std::abs(points[a] - points[b]) <= 1e-12 * std::max(1.0, scale)) {
        throw Error(ErrorCode::kInvalidInput, "constellation points must be distinct");
      }
    }
  }
  if (std::abs(mean) > 1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorCode::kInvalidInput, "constellation must be zero-mean");
  }
  Constellation c;
  c.points_ = std::move(points);
  int bits = 0;
  while ((std::size_t{1} << bits) < c.points_.size()) ++bits;
  c.bits_ = bits;
  return c;
}

int Constellation::nearest(Complex value) const {
  int best = 0;
  double best_dist = std::norm(value - points_[0]);
  for (int i = 1; i < size(); ++i) {
    const double d = std::norm(value - points_[i]);
    if (d < best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

void NoiseModel::validate() const {
  if (!std::isfinite(relay_var) || !std::isfinite(user_var) || relay_var < 0.0 ||
      user_var < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "noise variances must be finite and >= 0");
  }
}

// ---------------------------------------------------------------------------

std::vector<CMatrix> design_encoders(const Strategy& strategy,
                                     const ChannelSet& channels) {
  check_channels(strategy, channels);
  std::vector<CMatrix> encoders;
  encoders.reserve(strategy.users());
  for (int i = 0; i < strategy.users(); ++i) {
    const CMatrix& h = channels.uplink[i];
    Eigen::FullPivLU<CMatrix> lu(h);
    if (!lu.isInvertible() || condition_number(h) > kMaxChannelCondition) {
      throw Error(ErrorCode::kSingularChannel,
                  "uplink channel of user " + std::to_string(i + 1) +
                      " is not invertible");
    }
    encoders.push_back(lu.solve(strategy.user_frame(i)));
  }
  return encoders;
}

CVector relay_observe(std::span<const CMatrix> encoders,
                      const ChannelSet& channels,
                      std::span<const CVector> symbols, const CVector& z) {
  const int k = channels.users;
  const int n = channels.antennas;
  if (static_cast<int>(encoders.size()) != k ||
      static_cast<int>(symbols.size()) != k || z.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "relay_observe: shape mismatch");
  }
  CVector r = z;
  for (int i = 0; i < k; ++i) {
    if (encoders[i].rows() != n || encoders[i].cols() != symbols[i].size() ||
        channels.uplink[i].cols() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "relay_observe: user " + std::to_string(i + 1) +
                      " encoder/symbol shape mismatch");
    }
    r += channels.uplink[i] * (encoders[i] * symbols[i]);
  }
  return r;
}

SecrecyAudit secrecy_audit(std::span<const CMatrix> encoders,
                           const ChannelSet& channels, const Strategy& strategy,
                           double tol) {
  check_channels(strategy, channels);
  const int k = strategy.users();
  const int n = strategy.antennas();
  if (static_cast<int>(encoders.size()) != k) {
    throw Error(ErrorCode::kDimensionMismatch, "one encoder per user expected");
  }
  std::vector<CMatrix> images;
  for (int i = 0; i < k; ++i) {
    if (encoders[i].rows() != n || encoders[i].cols() != strategy.spec().dof[i]) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "encoder of user " + std::to_string(i + 1) + " has wrong shape");
    }
    images.push_back(channels.uplink[i] * encoders[i]);
  }

  SecrecyAudit audit;

  // Pairwise agreement of the columns serving each pair.
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const int dim = strategy.pair_dim(a, b);
      const int off_a = dim > 0 ? strategy.slot_offset(a, b) : 0;
      const int off_b = dim > 0 ? strategy.slot_offset(b, a) : 0;
      for (int c = 0; c < dim; ++c) {
        const CVector col_a = images[a].col(off_a + c);
        const CVector col_b = images[b].col(off_b + c);
        audit.max_column_mismatch = std::max(
            audit.max_column_mismatch, (col_a - col_b).cwiseAbs().maxCoeff());
        audit.terms.push_back({a, off_a + c, b, off_b + c, col_a});
      }
    }
  }
  if (audit.max_column_mismatch > tol) {
    throw Error(ErrorCode::kSecrecyViolation,
                "pair columns disagree by " +
                    std::to_string(audit.max_column_mismatch));
  }

  // Every symbol coefficient must coincide with exactly one coefficient of
  // another user.
  for (int i = 0; i < k; ++i) {
    for (Eigen::Index c = 0; c < images[i].cols(); ++c) {
      int matches = 0;
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        for (Eigen::Index e = 0; e < images[j].cols(); ++e) {
          if ((images[i].col(c) - images[j].col(e)).cwiseAbs().maxCoeff() <= tol) {
            ++matches;
          }
        }
      }
      if (matches != 1) {
        throw Error(ErrorCode::kSecrecyViolation,
                    "symbol " + std::to_string(c + 1) + " of user " +
                        std::to_string(i + 1) + " matches " +
                        std::to_string(matches) + " other coefficients");
      }
    }
  }

  CMatrix directions(n, static_cast<Eigen::Index>(audit.terms.size()));
  for (std::size_t t = 0; t < audit.terms.size(); ++t) {
    directions.col(static_cast<Eigen::Index>(t)) = audit.terms[t].direction;
  }
  audit.pair_frame_rank = numeric_rank(directions);
  if (static_cast<int>(audit.terms.size()) != n || audit.pair_frame_rank != n) {
    throw Error(ErrorCode::kSecrecyViolation,
                "pair sums do not decompose the relay space (rank " +
                    std::to_string(audit.pair_frame_rank) + " of " +
                    std::to_string(audit.terms.size()) + " terms, N = " +
                    std::to_string(n) + ")");
  }
  return audit;
}

// ---------------------------------------------------------------------------

Receiver::Receiver(const Strategy& strategy, const ChannelSet& channels,
                   std::span<const CMatrix> encoders, int user)
    : user_(user) {
  check_channels(strategy, channels);
  if (user < 0 || user >= strategy.users()) {
    throw Error(ErrorCode::kInvalidInput, "user index out of range");
  }
  if (static_cast<int>(encoders.size()) != strategy.users()) {
    throw Error(ErrorCode::kDimensionMismatch, "one encoder per user expected");
  }
  if (!verify_strategy(strategy).ok) {
    throw Error(ErrorCode::kStrategyInvalid, "strategy does not verify");
  }
  const CMatrix& g = channels.downlink[user];
  own_image_ = g * channels.uplink[user] * encoders[user];
  projector_ = perp_projector(interference_image(user, strategy, channels));
  zero_forcer_ = (projector_ * g * strategy.user_frame(user))
                     .completeOrthogonalDecomposition()
                     .pseudoInverse();
  for (int j : strategy.layout(user)) {
    const int dim = strategy.pair_dim(user, j);
    if (dim == 0) continue;
    partners_.push_back(j);
    block_sizes_.push_back(dim);
  }
}

DecodeResult Receiver::decode(const CVector& observation,
                              const CVector& own_symbols,
                              const Constellation& constellation) const {
  if (observation.size() != projector_.rows() ||
      own_symbols.size() != own_image_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "decode: shape mismatch");
  }
  const CVector y = observation - own_image_ * own_symbols;
  DecodeResult out;
  out.estimates = zero_forcer_ * (projector_ * y);
  Eigen::Index offset = 0;
  for (std::size_t b = 0; b < partners_.size(); ++b) {
    PartnerBlock block;
    block.partner = partners_[b];
    block.symbols.resize(block_sizes_[b]);
    for (int c = 0; c < block_sizes_[b]; ++c) {
      const int idx = constellation.nearest(out.estimates[offset + c]);
      block.indices.push_back(idx);
      block.symbols[c] = constellation.points()[idx];
    }
    offset += block_sizes_[b];
    out.blocks.push_back(std::move(block));
  }
  return out;
}

DecodeResult receiver_decode(int user, const CVector& observation,
                             const CVector& own_symbols,
                             std::span<const CMatrix> encoders,
                             const ChannelSet& channels,
                             const Strategy& strategy,
                             const Constellation& constellation) {
  return Receiver(strategy, channels, encoders, user)
      .decode(observation, own_symbols, constellation);
}

// ---------------------------------------------------------------------------

double SnrValue::db() const {
  if (infinite) return std::numeric_limits<double>::infinity();
  if (value <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(value);
}

SnrValue snr(int user, const Strategy& strategy, const ChannelSet& channels,
             const NoiseModel& noise) {
  check_channels(strategy, channels);
  noise.validate();
  if (!verify_strategy(strategy).ok) {
    throw Error(ErrorCode::kStrategyInvalid, "strategy does not verify");
  }
  const Subspace interference = interference_image(user, strategy, channels);
  const CMatrix p = perp_projector(interference);
  const CMatrix& g = channels.downlink.at(user);
  const double signal = (p * g * strategy.subspace(user).basis()).squaredNorm();
  const int rank = strategy.antennas() - interference.dim();
  const double denom =
      noise.relay_var * (p * g).squaredNorm() + noise.user_var * rank;
  if (denom <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {signal / denom, false};
}

SnrValue snr_instantaneous(int user, const Strategy& strategy,
                           const ChannelSet& channels, const CVector& z,
                           const CVector& w) {
  check_channels(strategy, channels);
  const Subspace interference = interference_image(user, strategy, channels);
  const CMatrix p = perp_projector(interference);
  const CMatrix& g = channels.downlink.at(user);
  if (z.size() != g.cols() || w.size() != g.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "noise vector shape mismatch");
  }
  const double signal = (p * g * strategy.subspace(user).basis()).squaredNorm();
  const double denom = (p * g * z).squaredNorm() + (p * w).squaredNorm();
  if (denom <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {signal / denom, false};
}

// ---------------------------------------------------------------------------

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::kInvalidInput, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

std::vector<SumClass> pairwise_sum_classes(const Constellation& constellation) {
  const auto& pts = constellation.points();
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p));
  std::vector<SumClass> classes;
  for (int a = 0; a < constellation.size(); ++a) {
    for (int b = 0; b < constellation.size(); ++b) {
      const Complex s = pts[a] + pts[b];
      auto it = std::find_if(classes.begin(), classes.end(), [&](const SumClass& c) {
        return std::abs(c.value - s) <= kSumMergeTol * scale;
      });
      if (it == classes.end()) {
        classes.push_back({s, {{a, b}}});
      } else {
        it->preimages.emplace_back(a, b);
      }
    }
  }
  return classes;
}

Rational relay_map_success(const Constellation& constellation) {
  const std::int64_t m = constellation.size();
  return make_rational(
      static_cast<std::int64_t>(pairwise_sum_classes(constellation).size()),
      m * m);
}

// ---------------------------------------------------------------------------

BaselineReport two_user_baseline(Complex h1, Complex h2, Complex g1,
                                 Complex g2, const Constellation& constellation,
                                 const NoiseModel& noise, int trials, Rng& rng) {
  if (h1 == 0.0 || h2 == 0.0 || g1 == 0.0 || g2 == 0.0) {
    throw Error(ErrorCode::kSingularChannel, "zero channel coefficient");
  }
  if (trials < 1) throw Error(ErrorCode::kInvalidInput, "trials must be >= 1");
  noise.validate();

  BaselineReport report;
  report.u1 = 1.0 / h1;
  report.u2 = 1.0 / h2;
  report.trials = trials;
  report.relay_map_exact = relay_map_success(constellation);

  const auto classes = pairwise_sum_classes(constellation);
  const auto& pts = constellation.points();
  std::uniform_int_distribution<int> pick(0, constellation.size() - 1);
  const double sz = std::sqrt(noise.relay_var);
  const double sw = std::sqrt(noise.user_var);

  // nearest point of the scaled constellation a * X
  auto slice = [&](Complex gain, Complex y) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < constellation.size(); ++i) {
      const double d = std::norm(gain * pts[i] - y);
      if (d < best_dist) {
        best = i;
        best_dist = d;
      }
    }
    return best;
  };

  std::int64_t err1 = 0;
  std::int64_t err2 = 0;
  std::int64_t relay_hits = 0;
  for (int t = 0; t < trials; ++t) {
    const int i1 = pick(rng);
    const int i2 = pick(rng);
    const Complex z = sz * complex_gaussian(1, 1, rng)(0, 0);
    const Complex w1 = sw * complex_gaussian(1, 1, rng)(0, 0);
    const Complex w2 = sw * complex_gaussian(1, 1, rng)(0, 0);

    const Complex x1 = pts[i1];
    const Complex x2 = pts[i2];
    const Complex r = h1 * report.u1 * x1 + h2 * report.u2 * x2 + z;
    const Complex y1 = g1 * r + w1 - g1 * h1 * report.u1 * x1;
    const Complex y2 = g2 * r + w2 - g2 * h2 * report.u2 * x2;
    if (slice(g1 * h2 * report.u2, y1) != i2) ++err1;
    if (slice(g2 * h1 * report.u1, y2) != i1) ++err2;

    // The relay sees x1 + x2 exactly and guesses among the preimages.
    const Complex sum = x1 + x2;
    const auto cls = std::min_element(
        classes.begin(), classes.end(), [&](const SumClass& a, const SumClass& b) {
          return std::abs(a.value - sum) < std::abs(b.value - sum);
        });
    std::uniform_int_distribution<std::size_t> guess(0, cls->preimages.size() - 1);
    if (cls->preimages[guess(rng)] == std::pair<int, int>{i1, i2}) ++relay_hits;
  }
  report.ser_user1 = static_cast<double>(err1) / trials;
  report.ser_user2 = static_cast<double>(err2) / trials;
  report.relay_map_success = static_cast<double>(relay_hits) / trials;
  return report;
}

}  // namespace relay_align
