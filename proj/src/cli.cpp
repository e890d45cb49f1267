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

#include "relay_align/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relay_align/error.hpp"
#include "relay_align/feasibility.hpp"
#include "relay_align/relay_sim.hpp"
#include "relay_align/seeding.hpp"
#include "relay_align/strategy_json.hpp"
#include "relay_align/variety.hpp"

namespace relay_align::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stream-local and locale-free number formatting.
std::string fixed(double v, int precision) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer");
    }
    return v;
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(f), {});
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Writes through a temporary sibling and renames it into place.
void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << content;
    f.flush();
    if (!f) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw UsageError("cannot write '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw UsageError("cannot write '" + path + "': " + ec.message());
  }
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_atomically(path, content);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct TupleArgs {
  int users = 0;
  int antennas = 0;
  std::vector<int> dof;
  std::string dij_path;
};

StrategySpec spec_from(const TupleArgs& a) {
  if (a.users < 2) throw UsageError("-K must be at least 2");
  if (a.antennas < 1) throw UsageError("-N must be at least 1");
  if (a.dof.empty()) throw UsageError("-d is required");
  StrategySpec spec;
  spec.users = a.users;
  spec.antennas = a.antennas;
  spec.dof = a.dof.size() == 1 ? std::vector<int>(a.users, a.dof[0]) : a.dof;
  if (static_cast<int>(spec.dof.size()) != a.users) {
    throw UsageError("-d needs 1 or K comma-separated values");
  }
  for (int d : spec.dof) {
    if (d < 0) throw UsageError("-d values must be non-negative");
  }
  if (!a.dij_path.empty()) {
    try {
      spec.pairwise = pair_table_from_json(read_json_file(a.dij_path), a.users);
    } catch (const SchemaError& e) {
      throw UsageError(std::string("--dij: ") + e.what());
    }
  }
  return spec;
}

json tuple_json(const StrategySpec& spec) {
  return json{{"K", spec.users}, {"N", spec.antennas}, {"d", spec.dof}};
}

std::string dof_label(const std::vector<int>& dof) {
  bool uniform = true;
  for (int d : dof) uniform = uniform && d == dof.front();
  if (uniform) return std::to_string(dof.front());
  std::string s;
  for (std::size_t i = 0; i < dof.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(dof[i]);
  }
  return s;
}

Constellation parse_constellation(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "qpsk") return Constellation::qpsk();
    if (name == "bpsk") return Constellation::bpsk();
    throw UsageError("unknown constellation '" + name + "'");
  }
  if (!j.is_array()) throw UsageError("constellation must be a name or a point list");
  std::vector<Complex> pts;
  for (const auto& p : j) {
    if (p.is_number()) {
      pts.emplace_back(p.get<double>(), 0.0);
    } else if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number()) {
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    } else {
      throw UsageError("constellation points must be numbers or [re, im] pairs");
    }
  }
  return Constellation::from_points(std::move(pts));
}

Constellation parse_constellation_flag(const std::string& text) {
  if (!text.empty() && text.front() == '[') {
    try {
      return parse_constellation(json::parse(text));
    } catch (const json::parse_error&) {
      throw UsageError("--constellation point list is not valid JSON");
    }
  }
  return parse_constellation(json(text));
}

// ---------------------------------------------------------------------------

int cmd_feasible(const TupleArgs& args, std::uint64_t seed,
                 const std::string& output, std::ostream& out) {
  const StrategySpec spec = spec_from(args);
  const TupleVerdict v = classify_tuple(spec);
  json j = tuple_json(spec);
  j["feasible"] = v == TupleVerdict::kFeasible;
  j["reason"] = v == TupleVerdict::kFeasible    ? "ok"
                : v == TupleVerdict::kSumMismatch ? "sum"
                                                  : "bound";
  j["seed"] = seed;
  emit(output, dump(j), out);
  return v == TupleVerdict::kFeasible ? kExitOk : kExitNegative;
}

int cmd_construct(const TupleArgs& args, std::uint64_t seed,
                  const std::string& output, std::ostream& out, std::ostream& err) {
  const StrategySpec spec = spec_from(args);
  spec.validate();
  const TupleVerdict v = classify_tuple(spec);
  if (v != TupleVerdict::kFeasible) {
    err << "infeasible tuple (" << (v == TupleVerdict::kSumMismatch ? "sum" : "bound")
        << ")\n";
    return kExitNegative;
  }
  std::optional<Strategy> strategy;
  if (spec.pairwise) {
    Rng rng = make_rng(seed, {});
    strategy.emplace(strategy_from_pairwise(spec, rng));
  } else {
    strategy.emplace(construct_strategy(spec));
  }
  emit(output, dump(strategy_to_json(*strategy, seed)), out);
  return kExitOk;
}

json verification_json(const VerificationReport& r, int antennas) {
  json pairs = json::object();
  const int k = r.pair_dims.users();
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) pairs[pair_key_name(i, j)] = r.pair_dims.at(i, j);
  }
  std::vector<bool> per_user(r.decomposition.per_user.begin(),
                             r.decomposition.per_user.end());
  json j;
  j["ok"] = r.ok;
  j["N"] = antennas;
  j["conditions"] = {
      {"i", {{"ok", r.dimensions.ok},
             {"measured_dims", r.dimensions.measured},
             {"total", r.dimensions.total}}},
      {"ii", {{"ok", r.decomposition.ok},
              {"per_user", per_user},
              {"intersection_dim_sums", r.decomposition.intersection_dim_sum}}},
      {"iii", {{"ok", r.relay_space.ok},
               {"pair_dim_total", r.relay_space.pair_dim_total},
               {"sum_dim", r.relay_space.sum_dim}}},
  };
  j["pair_dims"] = std::move(pairs);
  if (r.worst_triple_dim > 0) {
    j["worst_triple"] = {{"users",
                          {r.worst_triple[0] + 1, r.worst_triple[1] + 1,
                           r.worst_triple[2] + 1}},
                         {"dim", r.worst_triple_dim}};
  } else {
    j["worst_triple"] = nullptr;
  }
  j["failed"] = r.failures();
  return j;
}

int cmd_verify(const std::string& path, std::uint64_t seed, const std::string& output,
               std::ostream& out) {
  const StrategyFile file = parse_strategy_text(read_file(path));
  const VerificationReport report =
      verify_strategy(file.candidates, file.antennas, {}, std::span<const int>(file.dof));
  json j = verification_json(report, file.antennas);
  j["K"] = file.users;
  j["d"] = file.dof;
  j["seed"] = file.seed.value_or(seed);
  emit(output, dump(j), out);
  return report.ok ? kExitOk : kExitNegative;
}

int cmd_genericity(const TupleArgs& args, int trials, std::uint64_t seed,
                   const std::string& format, const std::string& output,
                   std::ostream& out) {
  const StrategySpec spec = spec_from(args);
  for (int d : spec.dof) {
    if (d > spec.antennas) throw UsageError("-d values must not exceed N");
  }
  if (trials < 1) throw UsageError("--trials must be at least 1");
  const GenericityResult r = generic_feasibility_rate(spec, trials, seed);
  if (format == "json") {
    json j = tuple_json(spec);
    j["trials"] = trials;
    j["seed"] = seed;
    j["passes"] = r.passes;
    j["pass_rate"] = r.rate();
    emit(output, dump(j), out);
  } else {
    std::ostringstream csv;
    csv << "K,N,d,trials,seed,pass_rate\n"
        << spec.users << ',' << spec.antennas << ',' << dof_label(spec.dof) << ','
        << trials << ',' << seed << ',' << fixed(r.rate(), 4) << '\n';
    emit(output, csv.str(), out);
  }
  return kExitOk;
}

struct SimArgs {
  std::string config_path;
  TupleArgs tuple;
  std::string constellation;
  std::vector<double> noise_grid;
  std::optional<int> trials;
  std::optional<int> blocks;
  std::string report_path;
};

const std::vector<double> kDefaultNoiseGrid{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
constexpr int kDefaultTrials = 1000;

int cmd_simulate(const SimArgs& args, const std::optional<std::uint64_t>& seed_flag,
                 const std::string& format, const std::string& output,
                 std::ostream& out, std::ostream& err) {
  json cfg = json::object();
  if (!args.config_path.empty()) {
    cfg = read_json_file(args.config_path);
    if (!cfg.is_object()) throw UsageError("simulation config must be a JSON object");
  }
  auto cfg_int = [&](const char* key, int fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg.at(key).is_number_integer()) {
      throw UsageError(std::string("config field '") + key + "' must be an integer");
    }
    return cfg.at(key).get<int>();
  };

  TupleArgs tuple = args.tuple;
  if (tuple.users == 0) tuple.users = cfg_int("K", 0);
  if (tuple.antennas == 0) tuple.antennas = cfg_int("N", 0);
  if (tuple.dof.empty() && cfg.contains("d")) {
    try {
      tuple.dof = cfg.at("d").is_array() ? cfg.at("d").get<std::vector<int>>()
                                         : std::vector<int>{cfg.at("d").get<int>()};
    } catch (const json::exception&) {
      throw UsageError("config field 'd' must be integers");
    }
  }
  StrategySpec spec = spec_from(tuple);
  if (!spec.pairwise && cfg.contains("dij")) {
    try {
      spec.pairwise = pair_table_from_json(cfg.at("dij"), spec.users);
    } catch (const SchemaError& e) {
      throw UsageError(std::string("config 'dij': ") + e.what());
    }
  }

  SimConfig sim;
  if (!args.constellation.empty()) {
    sim.constellation = parse_constellation_flag(args.constellation);
  } else if (cfg.contains("constellation")) {
    sim.constellation = parse_constellation(cfg.at("constellation"));
  }
  if (!args.noise_grid.empty()) {
    sim.noise_grid = args.noise_grid;
  } else if (cfg.contains("noise_grid")) {
    try {
      sim.noise_grid = cfg.at("noise_grid").get<std::vector<double>>();
    } catch (const json::exception&) {
      throw UsageError("config field 'noise_grid' must be numbers");
    }
  } else {
    sim.noise_grid = kDefaultNoiseGrid;
  }
  sim.trials = args.trials.value_or(cfg_int("trials", kDefaultTrials));
  sim.channel_blocks = args.blocks.value_or(cfg_int("channel_blocks", 1));
  if (sim.trials < 1) throw UsageError("--trials must be at least 1");
  if (sim.channel_blocks < 1 || sim.channel_blocks > sim.trials) {
    throw UsageError("--blocks must lie in [1, trials]");
  }
  for (double v : sim.noise_grid) {
    if (!std::isfinite(v) || v < 0.0) throw UsageError("noise variances must be >= 0");
  }
  std::optional<std::uint64_t> seed = seed_flag;
  if (!seed && cfg.contains("seed")) {
    if (!cfg.at("seed").is_number_unsigned()) {
      throw UsageError("config field 'seed' must be unsigned");
    }
    seed = cfg.at("seed").get<std::uint64_t>();
  }
  sim.seed = resolve_seed(seed);

  spec.validate();
  const TupleVerdict v = classify_tuple(spec);
  if (v != TupleVerdict::kFeasible) {
    err << "infeasible tuple (" << (v == TupleVerdict::kSumMismatch ? "sum" : "bound")
        << ")\n";
    return kExitNegative;
  }
  sim.spec = spec;

  const std::vector<SimReport> reports = run_monte_carlo(sim);
  const Rational exact = relay_map_success(sim.constellation);

  std::ostringstream csv;
  csv << "noise_var,user,ser,snr_db,relay_map_success\n";
  for (const auto& rep : reports) {
    for (const auto& u : rep.users) {
      csv << shortest(rep.noise_var) << ',' << u.user + 1 << ',' << shortest(u.ser) << ','
          << fixed(u.snr.db(), 4) << ',' << fixed(rep.relay_map_success, 4) << '\n';
    }
  }

  json points = json::array();
  for (const auto& p : sim.constellation.points()) points.push_back(complex_to_json(p));
  json config = tuple_json(spec);
  if (spec.pairwise) {
    json pairs = json::object();
    for (int i = 0; i < spec.users; ++i) {
      for (int j = i + 1; j < spec.users; ++j) {
        pairs[pair_key_name(i, j)] = spec.pairwise->at(i, j);
      }
    }
    config["dij"] = std::move(pairs);
  }
  config["constellation"] = std::move(points);
  config["noise_grid"] = sim.noise_grid;
  config["trials"] = sim.trials;
  config["channel_blocks"] = sim.channel_blocks;
  config["seed"] = sim.seed;

  json levels = json::array();
  for (const auto& rep : reports) {
    json users = json::array();
    for (const auto& u : rep.users) {
      json ju{{"user", u.user + 1},
              {"symbols", u.symbols},
              {"errors", u.errors},
              {"ser", u.ser},
              {"snr_infinite", u.snr.infinite}};
      if (u.snr.infinite) {
        ju["snr"] = nullptr;
        ju["snr_db"] = nullptr;
      } else {
        ju["snr"] = u.snr.value;
        ju["snr_db"] = u.snr.db();
      }
      users.push_back(std::move(ju));
    }
    levels.push_back({{"noise_var", rep.noise_var},
                      {"users", std::move(users)},
                      {"relay_guesses", rep.relay_guesses},
                      {"relay_successes", rep.relay_successes},
                      {"relay_map_success", rep.relay_map_success}});
  }
  json report{{"schema", "relay-align.sim-report"},
              {"seed", sim.seed},
              {"config", std::move(config)},
              {"relay_map_exact",
               std::to_string(exact.num) + "/" + std::to_string(exact.den)},
              {"channel_redraws", reports.front().channel_redraws},
              {"levels", std::move(levels)}};

  emit(output, format == "json" ? dump(report) : csv.str(), out);
  if (!args.report_path.empty()) write_atomically(args.report_path, dump(report));
  return kExitOk;
}

struct VarietyArgs {
  std::string strategy_path;
  std::string case_name = "random";
  int antennas = 3;
  int dim = 2;
  int trials = 100;
  int lines = 20;
  bool require_det = false;
};

json complex_json_with_abs(Complex c) {
  return {{"re", c.real()}, {"im", c.imag()}, {"abs", std::abs(c)}};
}

json subspace_probe(const std::vector<Subspace>& subspaces, bool require_det,
                    bool& unsupported) {
  const int k = static_cast<int>(subspaces.size());
  json residuals = json::array();
  for (const auto& s : subspaces) {
    if (s.dim() == 0) {
      residuals.push_back(nullptr);
    } else {
      const PluckerPoint p = plucker(s);
      residuals.push_back(plucker_residual(p.n, p.d, p.coords));
    }
  }
  json triples = json::array();
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      for (int c = b + 1; c < k; ++c) {
        triples.push_back({{"users", {a + 1, b + 1, c + 1}},
                           {"dim", triple_intersection_dim(subspaces[a], subspaces[b],
                                                           subspaces[c])}});
      }
    }
  }
  json j{{"plucker_residuals", std::move(residuals)}, {"triple_dims", std::move(triples)}};

  bool planes = k == 3;
  for (const auto& s : subspaces) planes = planes && s.ambient_dim() == 3 && s.dim() == 2;
  if (planes) {
    const Complex det = determinantal_test(subspaces[0], subspaces[1], subspaces[2]);
    json dj = complex_json_with_abs(det);
    dj["on_variety"] = std::abs(det) < kDeterminantZeroThreshold;
    j["determinant"] = std::move(dj);
  } else {
    j["determinant"] = nullptr;
    unsupported = require_det;
  }
  return j;
}

int cmd_variety(const VarietyArgs& args, std::uint64_t seed, const std::string& output,
                std::ostream& out, std::ostream& err) {
  json j;
  j["seed"] = seed;
  bool unsupported = false;
  bool failed = false;

  if (!args.strategy_path.empty() || args.case_name == "example" ||
      args.case_name == "degenerate") {
    std::vector<Subspace> subspaces;
    if (!args.strategy_path.empty()) {
      subspaces = parse_strategy_text(read_file(args.strategy_path)).candidates;
      j["case"] = "strategy";
    } else if (args.case_name == "example") {
      subspaces = three_user_worked_example().subspaces();
      j["case"] = "example";
    } else {
      const CMatrix id = CMatrix::Identity(3, 3);
      const Subspace plane = Subspace::from_orthonormal(id.leftCols(2));
      subspaces = {plane, plane, plane};
      j["case"] = "degenerate";
    }
    j.update(subspace_probe(subspaces, args.require_det, unsupported));
  } else if (args.case_name == "random") {
    if (args.antennas < 1 || args.dim < 1 || args.dim > args.antennas) {
      throw UsageError("random probe needs 1 <= d <= N");
    }
    if (args.trials < 1 || args.lines < 0) throw UsageError("bad --trials/--lines");
    j["case"] = "random";
    j["N"] = args.antennas;
    j["d"] = args.dim;
    j["trials"] = args.trials;

    Rng rng = make_rng(seed, {0});
    double worst = 0.0;
    for (int t = 0; t < args.trials; ++t) {
      const PluckerPoint p = plucker(random_subspace(args.antennas, args.dim, rng));
      worst = std::max(worst, plucker_residual(p.n, p.d, p.coords));
    }
    const bool plucker_ok = worst < 1e-9;
    failed = failed || !plucker_ok;
    j["plucker"] = {{"max_residual", worst}, {"ok", plucker_ok}};

    if (args.antennas == 3 && args.dim == 2) {
      Rng det_rng = make_rng(seed, {1});
      int agree = 0;
      int zeros = 0;
      for (int t = 0; t < args.trials; ++t) {
        const Subspace a = random_subspace(3, 2, det_rng);
        const Subspace b = random_subspace(3, 2, det_rng);
        const Subspace c = random_subspace(3, 2, det_rng);
        const bool det_zero = std::abs(determinantal_test(a, b, c)) < kDeterminantZeroThreshold;
        const bool meets = triple_intersection_dim(a, b, c) > 0;
        if (det_zero == meets) ++agree;
        if (det_zero) ++zeros;
      }
      failed = failed || agree != args.trials;
      j["determinant"] = {{"samples", args.trials},
                          {"agreements", agree},
                          {"on_variety", zeros}};

      Rng line_rng = make_rng(seed, {2});
      const LineProbeReport probe = codim_line_probe(line_rng, args.lines);
      double worst_root = 0.0;
      json degrees = json::array();
      for (const auto& l : probe.lines) {
        worst_root = std::max(worst_root, l.max_root_residual);
        degrees.push_back(l.degree);
      }
      failed = failed || probe.lines_with_root != args.lines;
      j["line_probe"] = {{"lines", args.lines},
                         {"lines_with_root", probe.lines_with_root},
                         {"degrees", std::move(degrees)},
                         {"max_root_residual", worst_root}};
    } else {
      j["determinant"] = nullptr;
      unsupported = args.require_det;
    }
  } else {
    throw UsageError("unknown --case '" + args.case_name + "'");
  }

  if (unsupported) {
    err << "determinant probe needs three planes in C^3 (K = N = 3, d = 2)\n";
    return kExitNegative;
  }
  emit(output, dump(j), out);
  return failed ? kExitNegative : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subspace-alignment strategies for multi-user relaying", "relay-align"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  std::string output;
  std::string format = "csv";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_flag, "Master seed (fallback: $RELAY_ALIGN_SEED)");
    sub->add_option("-o,--output", output, "Output path (default: stdout)");
  };
  auto add_tuple = [](CLI::App* sub, TupleArgs& t, bool with_dij) {
    sub->add_option("-K", t.users, "Number of users");
    sub->add_option("-N", t.antennas, "Antennas per user and at the relay");
    sub->add_option("-d", t.dof, "Degrees of freedom, one value or K values")
        ->delimiter(',');
    if (with_dij) sub->add_option("--dij", t.dij_path, "Pairwise d_ij table (JSON)");
  };

  TupleArgs feasible_args;
  auto* feasible = app.add_subcommand("feasible", "Decide whether (K, N, d) is feasible");
  add_tuple(feasible, feasible_args, false);
  add_common(feasible);

  TupleArgs construct_args;
  auto* construct = app.add_subcommand("construct", "Build a feasible strategy");
  add_tuple(construct, construct_args, true);
  add_common(construct);

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "Check a strategy file");
  verify->add_option("file", verify_path, "Strategy JSON")->required();
  add_common(verify);

  TupleArgs generic_args;
  int generic_trials = 100;
  auto* generic = app.add_subcommand("genericity", "Feasibility rate of random strategies");
  add_tuple(generic, generic_args, false);
  generic->add_option("--trials", generic_trials, "Number of random draws");
  generic->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  add_common(generic);

  SimArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo encode/relay/decode run");
  simulate->add_option("config", sim_args.config_path, "Simulation config (JSON)");
  add_tuple(simulate, sim_args.tuple, true);
  simulate->add_option("--constellation", sim_args.constellation,
                       "qpsk, bpsk or a JSON list of [re, im] points");
  simulate->add_option("--noise-grid", sim_args.noise_grid, "Noise variances")
      ->delimiter(',');
  simulate->add_option("--trials", sim_args.trials, "Symbol vectors per noise level");
  simulate->add_option("--blocks", sim_args.blocks, "Independent channel draws");
  simulate->add_option("--report", sim_args.report_path, "Also write the JSON report here");
  simulate->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  add_common(simulate);

  VarietyArgs var_args;
  auto* variety = app.add_subcommand("variety", "Plücker and determinantal probes");
  variety->add_option("--strategy", var_args.strategy_path, "Probe a strategy file");
  variety->add_option("--case", var_args.case_name, "random, example or degenerate")
      ->check(CLI::IsMember({"random", "example", "degenerate"}));
  variety->add_option("-N", var_args.antennas, "Ambient dimension for random probes");
  variety->add_option("-d", var_args.dim, "Subspace dimension for random probes");
  variety->add_option("--trials", var_args.trials, "Random samples");
  variety->add_option("--lines", var_args.lines, "Random line probes");
  variety->add_flag("--det", var_args.require_det, "Require the determinant probe");
  add_common(variety);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::uint64_t seed = resolve_seed(seed_flag);
    if (*feasible) return cmd_feasible(feasible_args, seed, output, out);
    if (*construct) return cmd_construct(construct_args, seed, output, out, err);
    if (*verify) return cmd_verify(verify_path, seed, output, out);
    if (*generic) {
      return cmd_genericity(generic_args, generic_trials, seed, format, output, out);
    }
    if (*simulate) return cmd_simulate(sim_args, seed_flag, format, output, out, err);
    if (*variety) return cmd_variety(var_args, seed, output, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kInfeasibleTuple:
      case ErrorCode::kInconsistentPairwise:
      case ErrorCode::kResampleExhausted:
      case ErrorCode::kStrategyInvalid:
      case ErrorCode::kSecrecyViolation:
      case ErrorCode::kSingularChannel:
        return kExitNegative;
      default:
        return kExitUsage;
    }
  }
  return kExitUsage;
}

}  // namespace relay_align::cli
