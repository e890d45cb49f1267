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

// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "relay_align/error.hpp"
#include "relay_align/feasibility.hpp"
#include "relay_align/relay_sim.hpp"
#include "relay_align/seeding.hpp"
#include "relay_align/variety.hpp"

#ifndef RELAY_ALIGN_BIN
#error "RELAY_ALIGN_BIN must name the CLI binary"
#endif

namespace {

using namespace relay_align;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

StrategySpec spec_of(int k, int n, std::vector<int> d) {
  StrategySpec s;
  s.users = k;
  s.antennas = n;
  s.dof = std::move(d);
  return s;
}

// ---------------------------------------------------------------------------

Outcome feasibility_equivalence() {
  const auto start = Clock::now();
  Rng rng = make_rng(2026, {1});
  std::vector<StrategySpec> tuples;
  for (int k = 2; k <= 6; ++k) {
    for (int n = 1; n <= 6; ++n) {
      for (int d = 0; d <= n; ++d) tuples.push_back(uniform_spec(k, n, d));
    }
  }
  // Asymmetric tuples: half uniform over [0, N]^K, half conditioned on sum 2N.
  int asymmetric = 0;
  while (asymmetric < 200) {
    const int k = 2 + static_cast<int>(rng() % 5);
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<int> d(k, 0);
    if (asymmetric % 2 == 0) {
      for (int& v : d) v = static_cast<int>(rng() % (n + 1));
    } else {
      for (int left = 2 * n, guard = 0; left > 0 && guard < 1000; ++guard) {
        const int i = static_cast<int>(rng() % k);
        if (d[i] < n) {
          ++d[i];
          --left;
        }
      }
    }
    if (std::all_of(d.begin(), d.end(), [&](int v) { return v == d[0]; })) continue;
    tuples.push_back(spec_of(k, n, d));
    ++asymmetric;
  }

  int mismatches = 0;
  int feasible = 0;
  for (const auto& spec : tuples) {
    const int sum = std::accumulate(spec.dof.begin(), spec.dof.end(), 0);
    const bool expected =
        sum == 2 * spec.antennas &&
        *std::max_element(spec.dof.begin(), spec.dof.end()) <= spec.antennas;
    bool built = false;
    try {
      built = verify_strategy(construct_strategy(spec)).ok;
    } catch (const Error& e) {
      built = false;
      if (expected || e.code() != ErrorCode::kInfeasibleTuple) ++mismatches;
    }
    if (built != expected) ++mismatches;
    if (expected) ++feasible;
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 60.0,
          std::to_string(tuples.size()) + " tuples (" + std::to_string(feasible) +
              " feasible, " + std::to_string(asymmetric) + " asymmetric), " +
              std::to_string(mismatches) + " mismatches, " + fmt(t, 3) + " s"};
}

Outcome generic_classification() {
  const auto start = Clock::now();
  struct Case {
    int k, n, d;
    double expected;
  };
  const std::vector<Case> cases{{2, 1, 1, 1.0}, {2, 2, 2, 1.0}, {2, 3, 3, 1.0},
                                {2, 4, 4, 1.0}, {3, 3, 2, 1.0}, {3, 6, 4, 1.0},
                                {3, 9, 6, 1.0}, {4, 2, 1, 0.0}, {4, 4, 2, 0.0},
                                {5, 5, 2, 0.0}, {6, 3, 1, 0.0}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const double rate = generic_feasibility_rate(uniform_spec(c.k, c.n, c.d), 100, 7).rate();
    ok = ok && rate == c.expected;
    detail += "(" + std::to_string(c.k) + "," + std::to_string(c.n) + "," +
              std::to_string(c.d) + ")=" + fmt(rate, 3) + " ";
  }
  const double t = seconds_since(start);
  return {ok && t < 60.0, detail + fmt(t, 3) + " s"};
}

Outcome dimension_formulas() {
  int checked = 0;
  int bad = 0;
  for (int n = 3; n <= 30; n += 3) {
    StrategySpec spec = uniform_spec(3, n, 2 * n / 3);
    spec.pairwise = symmetric_pairwise_table(3, n);
    ++checked;
    if (feasible_variety_dim(spec) != 2LL * n * n / 3) ++bad;
  }
  // N^2 (1 - 2/(K(K-1))) and N^2 (1 - 2/K) written as exact fractions.
  auto sym = [](std::int64_t k, std::int64_t n) {
    return n * n * (k * (k - 1) - 2) / (k * (k - 1));
  };
  auto paired = [](std::int64_t k, std::int64_t n) { return n * n * (k - 2) / k; };
  const std::vector<std::pair<int, int>> sym_cases{{3, 3},  {3, 6},  {3, 9},  {4, 6},
                                                   {4, 12}, {4, 18}, {5, 10}, {5, 20},
                                                   {5, 30}, {6, 15}, {6, 30}};
  const std::vector<std::pair<int, int>> paired_cases{
      {2, 2}, {2, 5}, {4, 2}, {4, 4}, {4, 6}, {6, 3}, {6, 6}, {6, 9}, {8, 4}, {8, 8}};
  for (auto [k, n] : sym_cases) {
    StrategySpec spec = uniform_spec(k, n, 2 * n / k);
    spec.pairwise = symmetric_pairwise_table(k, n);
    ++checked;
    if ((std::int64_t{n} * n * (k * (k - 1) - 2)) % (k * (k - 1)) != 0 ||
        feasible_variety_dim(spec) != sym(k, n) ||
        symmetric_pairwise_dim_closed_form(k, n) != sym(k, n)) {
      ++bad;
    }
  }
  for (auto [k, n] : paired_cases) {
    StrategySpec spec = uniform_spec(k, n, 2 * n / k);
    spec.pairwise = paired_table(k, n);
    ++checked;
    if ((std::int64_t{n} * n * (k - 2)) % k != 0 || feasible_variety_dim(spec) != paired(k, n) ||
        paired_dim_closed_form(k, n) != paired(k, n)) {
      ++bad;
    }
  }
  return {bad == 0, std::to_string(checked) + " cases (" +
                        std::to_string(sym_cases.size() + paired_cases.size()) +
                        " closed-form), " + std::to_string(bad) + " mismatches"};
}

Outcome worked_example() {
  const Strategy s = three_user_worked_example();
  const ChannelSet ch = identity_channels(3, 3);
  const auto enc = design_encoders(s, ch);
  const Constellation q = Constellation::qpsk();
  std::vector<Receiver> rx;
  for (int u = 0; u < 3; ++u) rx.emplace_back(s, ch, enc, u);

  double worst = 0.0;
  int wrong = 0;
  int cases = 0;
  // Every QPSK assignment of the six symbols.
  for (int code = 0; code < 4096; ++code) {
    std::vector<CVector> x(3, CVector(2));
    for (int p = 0; p < 6; ++p) x[p / 2][p % 2] = q.points()[(code >> (2 * p)) & 3];
    const CVector r = relay_observe(enc, ch, x, CVector::Zero(3));
    CVector expected(3);
    expected << x[0][0] + x[2][1], x[0][1] + x[1][0], x[1][1] + x[2][0];
    worst = std::max(worst, (r - expected).cwiseAbs().maxCoeff());

    // User 1: x2^1, x3^2. User 2: x1^2, x3^1. User 3: x1^1, x2^2.
    const DecodeResult d0 = rx[0].decode(r, x[0], q);
    const DecodeResult d1 = rx[1].decode(r, x[1], q);
    const DecodeResult d2 = rx[2].decode(r, x[2], q);
    auto got = [](const DecodeResult& d, int partner) {
      for (const auto& b : d.blocks) {
        if (b.partner == partner) return b.symbols[0];
      }
      return Complex(std::nan(""), 0);
    };
    const bool ok = got(d0, 1) == x[1][0] && got(d0, 2) == x[2][1] &&
                    got(d1, 0) == x[0][1] && got(d1, 2) == x[2][0] &&
                    got(d2, 0) == x[0][0] && got(d2, 1) == x[1][1];
    if (!ok) ++wrong;
    ++cases;
  }
  return {worst <= 1e-12 && wrong == 0,
          std::to_string(cases) + " symbol assignments, max relay deviation " +
              fmt(worst, 3) + ", " + std::to_string(wrong) + " wrong recoveries"};
}

Outcome secrecy() {
  struct Family {
    const char* name;
    int k, n, d;
    bool paired;
  };
  const std::vector<Family> families{{"(3,3,2)", 3, 3, 2, false},
                                     {"(3,6,4)", 3, 6, 4, false},
                                     {"(4,2,1)-paired", 4, 2, 1, true},
                                     {"(6,3,1)-paired", 6, 3, 1, true}};
  int strategies = 0;
  int failures = 0;
  int controls_caught = 0;
  double worst = 0.0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& fam = families[f];
    StrategySpec spec = uniform_spec(fam.k, fam.n, fam.d);
    spec.pairwise = fam.paired ? paired_table(fam.k, fam.n)
                               : symmetric_pairwise_table(fam.k, fam.n);
    for (int trial = 0; trial < 50; ++trial) {
      Rng rng = make_rng(5, {f, static_cast<std::uint64_t>(trial)});
      const Strategy s = strategy_from_pairwise(spec, rng);
      if (!verify_strategy(s).ok) {
        ++failures;
        continue;
      }
      const ChannelSet ch = draw_channels(fam.k, fam.n, rng);
      auto enc = design_encoders(s, ch);
      ++strategies;
      // Independent check of the relay-side columns pair by pair.
      for (int a = 0; a < fam.k; ++a) {
        for (int b = a + 1; b < fam.k; ++b) {
          for (int c = 0; c < s.pair_dim(a, b); ++c) {
            const CVector ca = ch.uplink[a] * enc[a].col(s.slot_offset(a, b) + c);
            const CVector cb = ch.uplink[b] * enc[b].col(s.slot_offset(b, a) + c);
            worst = std::max(worst, (ca - cb).cwiseAbs().maxCoeff());
          }
        }
      }
      try {
        secrecy_audit(enc, ch, s);
      } catch (const Error&) {
        ++failures;
      }
      // Negative control: nudge one coefficient.
      const int victim = trial % fam.k;
      enc[victim](trial % fam.n, 0) += Complex(1e-6, -1e-6);
      try {
        secrecy_audit(enc, ch, s);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kSecrecyViolation) ++controls_caught;
      }
    }
  }
  return {failures == 0 && worst <= 1e-9 && controls_caught == strategies,
          std::to_string(strategies) + " strategies, max column mismatch " + fmt(worst, 3) +
              ", " + std::to_string(controls_caught) + "/" + std::to_string(strategies) +
              " perturbations rejected"};
}

Outcome relay_equivocation() {
  // Oracle: enumerate the 16 ordered QPSK pairs.
  const auto pts = Constellation::qpsk().points();
  std::set<std::pair<long, long>> sums;
  for (auto a : pts) {
    for (auto b : pts) sums.emplace(std::lround((a + b).real()), std::lround((a + b).imag()));
  }
  const Rational q = relay_map_success(Constellation::qpsk());
  const Rational b = relay_map_success(Constellation::bpsk());

  SimConfig cfg;
  cfg.spec = uniform_spec(3, 3, 2);
  cfg.noise_grid = {0.0};
  cfg.trials = 10000;
  cfg.seed = 11;
  const double mc = run_monte_carlo(cfg).front().relay_map_success;

  const bool ok = q == make_rational(9, 16) && sums.size() == 9 &&
                  b == make_rational(3, 4) && mc >= 0.5425 && mc <= 0.5825;
  return {ok, "QPSK " + std::to_string(q.num) + "/" + std::to_string(q.den) + " (oracle " +
                  std::to_string(sums.size()) + "/16), BPSK " + std::to_string(b.num) + "/" +
                  std::to_string(b.den) + ", Monte Carlo " + fmt(mc, 5) + " at 10^4 trials"};
}

Outcome decoding_under_noise() {
  const auto start = Clock::now();
  SimConfig cfg;
  cfg.spec = uniform_spec(3, 3, 2);
  cfg.noise_grid = {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  cfg.trials = 10000;
  cfg.seed = 3;
  const auto reports = run_monte_carlo(cfg);
  bool ok = true;
  std::string detail;
  for (int u = 0; u < 3; ++u) {
    const double last = reports.back().users[u].ser;
    ok = ok && last < 1e-3;
    for (std::size_t l = 1; l < reports.size(); ++l) {
      const auto& prev = reports[l - 1].users[u];
      const auto& cur = reports[l].users[u];
      const double n = static_cast<double>(cur.symbols);
      const double sigma = std::sqrt(prev.ser * (1 - prev.ser) / n + cur.ser * (1 - cur.ser) / n);
      if (cur.ser > prev.ser + 2 * sigma) ok = false;
    }
    detail += "user " + std::to_string(u + 1) + " SER " + fmt(reports.front().users[u].ser, 3) +
              " -> " + fmt(last, 3) + "; ";
  }
  const double t = seconds_since(start);
  return {ok && t < 120.0, detail + fmt(t, 3) + " s"};
}

Outcome variety_probes() {
  Rng rng = make_rng(8, {});
  int agree = 0;
  int total = 0;
  auto check = [&](const Subspace& a, const Subspace& b, const Subspace& c) {
    const bool det_zero = std::abs(determinantal_test(a, b, c)) < kDeterminantZeroThreshold;
    if (det_zero == (triple_intersection_dim(a, b, c) > 0)) ++agree;
    ++total;
  };
  for (int i = 0; i < 100; ++i) {
    const Subspace a = random_subspace(3, 2, rng);
    const Subspace b = random_subspace(3, 2, rng);
    check(a, b, random_subspace(3, 2, rng));
  }
  const Subspace p = random_subspace(3, 2, rng);
  check(p, p, p);
  check(p, p, random_subspace(3, 2, rng));
  for (int i = 0; i < 3; ++i) {
    const CMatrix line = complex_gaussian(3, 1, rng);
    std::vector<Subspace> planes;
    for (int j = 0; j < 3; ++j) {
      CMatrix m(3, 2);
      m << line, complex_gaussian(3, 1, rng);
      planes.push_back(orthonormal_basis(m));
    }
    check(planes[0], planes[1], planes[2]);
  }

  double worst_residual = 0.0;
  int points = 0;
  for (int n = 2; n <= 7; ++n) {
    for (int d = 1; d <= n; ++d) {
      for (int t = 0; t < 5; ++t) {
        const PluckerPoint pt = plucker(orthonormal_basis(complex_gaussian(n, d, rng)));
        worst_residual = std::max(worst_residual, plucker_residual(n, d, pt.coords));
        if (!check_plucker_relations(pt)) worst_residual = std::max(worst_residual, 1.0);
        ++points;
      }
    }
  }

  const LineProbeReport lines = codim_line_probe(rng, 20);
  const bool ok = agree == total && worst_residual < 1e-9 && lines.lines_with_root == 20;
  return {ok, std::to_string(agree) + "/" + std::to_string(total) +
                  " determinant agreements, max Plücker residual " + fmt(worst_residual, 3) +
                  " over " + std::to_string(points) + " points, " +
                  std::to_string(lines.lines_with_root) + "/20 lines with a root"};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

Outcome reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "relay_align_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string bin = RELAY_ALIGN_BIN;
  const std::string strategy = (dir / "strategy.json").string();
  const std::vector<std::string> commands{
      "feasible -K 3 -N 3 -d 2",
      "construct -K 3 -N 6 -d 4",
      "construct -K 4 -N 2 -d 1 --dij " + (dir / "dij.json").string(),
      "verify " + strategy,
      "genericity -K 3 -N 6 -d 4 --trials 50",
      "genericity -K 4 -N 4 -d 2 --trials 50 --format json",
      "simulate -K 3 -N 3 -d 2 --trials 2000",
      "simulate -K 3 -N 3 -d 2 --trials 500 --blocks 5 --format json",
      "variety",
      "variety --case example",
  };
  std::ofstream(dir / "dij.json") << R"({"1-2": 1, "3-4": 1})";
  int same = 0;
  int failed = 0;
  if (std::system(("\"" + bin + "\" construct -K 3 -N 3 -d 2 --seed 1 -o \"" + strategy + "\"")
                      .c_str()) != 0) {
    ++failed;
  }
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("out" + std::to_string(c) + "_" + std::to_string(rep));
      const std::string cmd =
          "\"" + bin + "\" " + commands[c] + " --seed 1234 -o \"" + out.string() + "\"";
      if (std::system(cmd.c_str()) != 0) ++failed;
      outputs[rep] = slurp(out);
    }
    if (!outputs[0].empty() && outputs[0] == outputs[1]) ++same;
  }
  fs::remove_all(dir);
  return {failed == 0 && same == static_cast<int>(commands.size()),
          std::to_string(same) + "/" + std::to_string(commands.size()) +
              " commands byte-identical across reruns, " + std::to_string(failed) +
              " nonzero exits"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "feasibility equivalence", feasibility_equivalence},
      {2, "generic classification", generic_classification},
      {3, "dimension formulas", dimension_formulas},
      {4, "three-user golden example", worked_example},
      {5, "secrecy audit", secrecy},
      {6, "relay equivocation", relay_equivocation},
      {7, "decoding under noise", decoding_under_noise},
      {8, "variety probes", variety_probes},
      {9, "reproducibility", reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name
              << "): " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
