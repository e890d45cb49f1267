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

#ifndef RELAY_ALIGN_RELAY_SIM_HPP
#define RELAY_ALIGN_RELAY_SIM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relay_align/feasibility.hpp"
#include "relay_align/subspace.hpp"

namespace relay_align {

// ---------------------------------------------------------------------------
// Channels

inline constexpr double kMaxChannelCondition = 1e8;

/// User-to-relay (uplink) and relay-to-user (downlink) N x N matrices.
struct ChannelSet {
  int users = 0;
  int antennas = 0;
  std::vector<CMatrix> uplink;    // H_i
  std::vector<CMatrix> downlink;  // G_k
  int redraws = 0;
  double worst_condition = 0.0;
};

double condition_number(const CMatrix& m);

// i.i.d. CN(0,1) entries; any matrix with condition number above
// kMaxChannelCondition is redrawn.
ChannelSet draw_channels(int users, int antennas, Rng& rng);
ChannelSet identity_channels(int users, int antennas);

// ---------------------------------------------------------------------------
// Constellations and noise

class Constellation {
 public:
  static Constellation qpsk();  // {1, i, -1, -i}
  static Constellation bpsk();  // {1, -1}
  // Points must be finite, distinct and zero-mean.
  static Constellation from_points(std::vector<Complex> points);

  const std::vector<Complex>& points() const noexcept { return points_; }
  int size() const noexcept { return static_cast<int>(points_.size()); }
  int bits_per_symbol() const noexcept { return bits_; }
  int nearest(Complex value) const;

 private:
  std::vector<Complex> points_;
  int bits_ = 0;
};

struct NoiseModel {
  double relay_var = 0.0;  // variance of each entry of z
  double user_var = 0.0;   // variance of each entry of w_k

  void validate() const;
};

// ---------------------------------------------------------------------------
// Encoding and the relay

// U_i = H_i^{-1} F_i, F_i the user's frame in the strategy.
std::vector<CMatrix> design_encoders(const Strategy& strategy,
                                     const ChannelSet& channels);

// r = sum_i H_i U_i x_i + z
CVector relay_observe(std::span<const CMatrix> encoders,
                      const ChannelSet& channels,
                      std::span<const CVector> symbols, const CVector& z);

struct PairTerm {
  int user_a = 0;  // user_a < user_b
  int slot_a = 0;
  int user_b = 0;
  int slot_b = 0;
  CVector direction;  // relay-side coefficient shared by both symbols
};

struct SecrecyAudit {
  double max_column_mismatch = 0.0;
  int pair_frame_rank = 0;
  std::vector<PairTerm> terms;
};

inline constexpr double kSecrecyTol = 1e-9;

// Checks that every symbol's relay-side coefficient coincides with exactly
// one symbol of another user, and that the pair sums are recoverable from the
// relay observation. Throws SecrecyViolation otherwise.
SecrecyAudit secrecy_audit(std::span<const CMatrix> encoders,
                           const ChannelSet& channels,
                           const Strategy& strategy, double tol = kSecrecyTol);

// ---------------------------------------------------------------------------
// Receivers

struct PartnerBlock {
  int partner = 0;
  std::vector<int> indices;  // constellation indices, in slot order
  CVector symbols;
};

struct DecodeResult {
  std::vector<PartnerBlock> blocks;  // in the receiving user's layout order
  CVector estimates;                 // zero-forced soft estimates
};

/// Per-user decoder: subtract own contribution, project away the
/// interference image G_k I_k, zero-force, slice per coordinate.
class Receiver {
 public:
  // Throws StrategyInvalid when the strategy does not verify.
  Receiver(const Strategy& strategy, const ChannelSet& channels,
           std::span<const CMatrix> encoders, int user);

  int user() const noexcept { return user_; }
  const CMatrix& projector() const noexcept { return projector_; }

  DecodeResult decode(const CVector& observation, const CVector& own_symbols,
                      const Constellation& constellation) const;

 private:
  int user_ = 0;
  std::vector<int> partners_;
  std::vector<int> block_sizes_;
  CMatrix own_image_;  // G_k H_k U_k
  CMatrix projector_;  // onto (G_k I_k)^perp
  CMatrix zero_forcer_;
};

DecodeResult receiver_decode(int user, const CVector& observation,
                             const CVector& own_symbols,
                             std::span<const CMatrix> encoders,
                             const ChannelSet& channels,
                             const Strategy& strategy,
                             const Constellation& constellation);

// ---------------------------------------------------------------------------
// SNR

struct SnrValue {
  double value = 0.0;
  bool infinite = false;

  double db() const;
};

// ||P G B||_F^2 / (s_z ||P G||_F^2 + s_w rank P)
SnrValue snr(int user, const Strategy& strategy, const ChannelSet& channels,
             const NoiseModel& noise);
// ||P G B||_F^2 / (||P G z||^2 + ||P w||^2) for one noise draw.
SnrValue snr_instantaneous(int user, const Strategy& strategy,
                           const ChannelSet& channels, const CVector& z,
                           const CVector& w);

// ---------------------------------------------------------------------------
// Relay equivocation

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / den; }
  bool operator==(const Rational&) const = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

struct SumClass {
  Complex value;
  std::vector<std::pair<int, int>> preimages;  // ordered (a, b) indices
};

std::vector<SumClass> pairwise_sum_classes(const Constellation& constellation);

// (number of distinct sums) / |X|^2
Rational relay_map_success(const Constellation& constellation);

// ---------------------------------------------------------------------------
// Monte Carlo

struct SimConfig {
  StrategySpec spec;
  Constellation constellation = Constellation::qpsk();
  std::vector<double> noise_grid;
  int trials = 0;
  std::uint64_t seed = 0;
  int channel_blocks = 1;

  void validate() const;
};

struct UserStats {
  int user = 0;
  std::int64_t symbols = 0;
  std::int64_t errors = 0;
  double ser = 0.0;
  SnrValue snr;  // mean over channel blocks, analytic form
};

struct SimReport {
  double noise_var = 0.0;
  std::vector<UserStats> users;
  std::int64_t relay_guesses = 0;
  std::int64_t relay_successes = 0;
  double relay_map_success = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  int channel_redraws = 0;
};

// One report per noise level. Channel block b draws from the stream
// (seed, 0, b) and trial t from (seed, 1, t); every noise level reuses the
// same channel and unit-noise draws, scaled by its variance.
std::vector<SimReport> run_monte_carlo(const SimConfig& config);

// ---------------------------------------------------------------------------
// Two-user scalar baseline

struct BaselineReport {
  Complex u1;
  Complex u2;
  std::int64_t trials = 0;
  double ser_user1 = 0.0;
  double ser_user2 = 0.0;
  double relay_map_success = 0.0;
  Rational relay_map_exact;
};

BaselineReport two_user_baseline(Complex h1, Complex h2, Complex g1,
                                 Complex g2, const Constellation& constellation,
                                 const NoiseModel& noise, int trials, Rng& rng);

}  // namespace relay_align

#endif  // RELAY_ALIGN_RELAY_SIM_HPP
