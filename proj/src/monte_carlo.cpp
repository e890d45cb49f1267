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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relay_align/error.hpp"
#include "relay_align/relay_sim.hpp"
#include "relay_align/seeding.hpp"

namespace relay_align {
namespace {

constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kTrialStream = 1;

// Everything fixed for one channel realization.
struct Block {
  ChannelSet channels;
  Strategy strategy;
  std::vector<CMatrix> encoders;
  std::vector<Receiver> receivers;
  std::vector<PairTerm> terms;
  Eigen::PartialPivLU<CMatrix> pair_frame;
};

Block make_block(const SimConfig& config, int index) {
  const StrategySpec& spec = config.spec;
  Rng rng = make_rng(config.seed, {kChannelStream, static_cast<std::uint64_t>(index)});
  ChannelSet channels = draw_channels(spec.users, spec.antennas, rng);
  Strategy strategy =
      spec.pairwise ? strategy_from_pairwise(spec, rng) : construct_strategy(spec);
  std::vector<CMatrix> encoders = design_encoders(strategy, channels);
  SecrecyAudit audit = secrecy_audit(encoders, channels, strategy);

  std::vector<Receiver> receivers;
  for (int k = 0; k < spec.users; ++k) {
    receivers.emplace_back(strategy, channels, encoders, k);
  }
  CMatrix directions(spec.antennas, spec.antennas);
  for (int t = 0; t < spec.antennas; ++t) directions.col(t) = audit.terms[t].direction;

  return Block{std::move(channels), std::move(strategy), std::move(encoders),
               std::move(receivers), std::move(audit.terms),
               Eigen::PartialPivLU<CMatrix>(directions)};
}

std::size_t nearest_class(const std::vector<SumClass>& classes, Complex s) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < classes.size(); ++c) {
    if (std::abs(classes[c].value - s) < std::abs(classes[best].value - s)) best = c;
  }
  return best;
}

}  // namespace

void SimConfig::validate() const {
  if (!is_feasible_tuple(spec)) {
    throw Error(ErrorCode::kInfeasibleTuple,
                "tuple does not satisfy sum d_i = 2N, d_i <= N");
  }
  if (trials < 1) throw Error(ErrorCode::kInvalidInput, "trials must be >= 1");
  if (noise_grid.empty()) {
    throw Error(ErrorCode::kInvalidInput, "noise grid must be nonempty");
  }
  for (double v : noise_grid) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidInput, "noise variances must be finite and >= 0");
    }
  }
  if (channel_blocks < 1 || channel_blocks > trials) {
    throw Error(ErrorCode::kInvalidInput, "channel_blocks must lie in [1, trials]");
  }
}

std::vector<SimReport> run_monte_carlo(const SimConfig& config) {
  config.validate();
  const StrategySpec& spec = config.spec;
  const int k = spec.users;
  const int n = spec.antennas;
  const std::size_t levels = config.noise_grid.size();
  const auto& points = config.constellation.points();
  const auto classes = pairwise_sum_classes(config.constellation);

  std::vector<SimReport> reports(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    reports[l].noise_var = config.noise_grid[l];
    reports[l].trials = config.trials;
    reports[l].seed = config.seed;
    reports[l].users.resize(k);
    for (int u = 0; u < k; ++u) reports[l].users[u].user = u;
  }

  std::int64_t relay_guesses = 0;
  std::int64_t relay_successes = 0;
  int redraws = 0;
  std::vector<std::vector<double>> snr_sum(levels, std::vector<double>(k, 0.0));
  std::vector<std::vector<bool>> snr_inf(levels, std::vector<bool>(k, false));

  std::uniform_int_distribution<int> pick(0, config.constellation.size() - 1);
  std::vector<std::vector<int>> idx(k);
  std::vector<CVector> x(k);
  std::vector<CVector> w0(k);

  for (int b = 0; b < config.channel_blocks; ++b) {
    const Block block = make_block(config, b);
    redraws += block.channels.redraws;
    for (std::size_t l = 0; l < levels; ++l) {
      const NoiseModel noise{config.noise_grid[l], config.noise_grid[l]};
      for (int u = 0; u < k; ++u) {
        const SnrValue s = snr(u, block.strategy, block.channels, noise);
        if (s.infinite) {
          snr_inf[l][u] = true;
        } else {
          snr_sum[l][u] += s.value;
        }
      }
    }

    // Trials [first, last) use this block's channels.
    const auto first = static_cast<int>(
        static_cast<std::int64_t>(b) * config.trials / config.channel_blocks);
    const auto last = static_cast<int>(
        static_cast<std::int64_t>(b + 1) * config.trials / config.channel_blocks);
    for (int t = first; t < last; ++t) {
      Rng rng = make_rng(config.seed, {kTrialStream, static_cast<std::uint64_t>(t)});
      for (int u = 0; u < k; ++u) {
        const int d = spec.dof[u];
        idx[u].resize(d);
        x[u].resize(d);
        for (int c = 0; c < d; ++c) {
          idx[u][c] = pick(rng);
          x[u][c] = points[idx[u][c]];
        }
      }
      const CVector z0 = complex_gaussian(n, 1, rng).col(0);
      for (int u = 0; u < k; ++u) w0[u] = complex_gaussian(n, 1, rng).col(0);

      // Relay: exact pair sums, uniform guess among their preimages.
      const CVector r0 =
          relay_observe(block.encoders, block.channels, x, CVector::Zero(n));
      const CVector sums = block.pair_frame.solve(r0);
      for (std::size_t p = 0; p < block.terms.size(); ++p) {
        const PairTerm& term = block.terms[p];
        const SumClass& cls =
            classes[nearest_class(classes, sums[static_cast<Eigen::Index>(p)])];
        std::uniform_int_distribution<std::size_t> guess(0, cls.preimages.size() - 1);
        const auto g = cls.preimages[guess(rng)];
        ++relay_guesses;
        if (g.first == idx[term.user_a][term.slot_a] &&
            g.second == idx[term.user_b][term.slot_b]) {
          ++relay_successes;
        }
      }

      for (std::size_t l = 0; l < levels; ++l) {
        const double sigma = std::sqrt(config.noise_grid[l]);
        const CVector r = r0 + sigma * z0;
        for (int u = 0; u < k; ++u) {
          const CVector y = block.channels.downlink[u] * r + sigma * w0[u];
          const DecodeResult dec =
              block.receivers[u].decode(y, x[u], config.constellation);
          UserStats& stats = reports[l].users[u];
          for (const PartnerBlock& pb : dec.blocks) {
            const int off = block.strategy.slot_offset(pb.partner, u);
            for (std::size_t c = 0; c < pb.indices.size(); ++c) {
              ++stats.symbols;
              if (pb.indices[c] != idx[pb.partner][off + c]) ++stats.errors;
            }
          }
        }
      }
    }
  }

  const double relay_rate =
      relay_guesses == 0 ? 0.0 : static_cast<double>(relay_successes) / relay_guesses;
  for (std::size_t l = 0; l < levels; ++l) {
    SimReport& rep = reports[l];
    rep.relay_guesses = relay_guesses;
    rep.relay_successes = relay_successes;
    rep.relay_map_success = relay_rate;
    rep.channel_redraws = redraws;
    for (int u = 0; u < k; ++u) {
      UserStats& s = rep.users[u];
      s.ser = s.symbols == 0 ? 0.0 : static_cast<double>(s.errors) / s.symbols;
      if (snr_inf[l][u]) {
        s.snr = {std::numeric_limits<double>::infinity(), true};
      } else {
        s.snr = {snr_sum[l][u] / config.channel_blocks, false};
      }
    }
  }
  return reports;
}

}  // namespace relay_align
