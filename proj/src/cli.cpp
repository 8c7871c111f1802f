// Copyright 2026 The robust-mfg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rmfg/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmfg/dpp.hpp"
#include "rmfg/game.hpp"
#include "rmfg/mfe.hpp"
#include "rmfg/nagent.hpp"
#include "rmfg/serialize.hpp"

namespace rmfg {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNotConverged = 2;

struct GameOptions {
  bool crowd = false;
  std::string lambda = "0";
  double c = 1e-7;
  std::string mu0 = "0.2,0.1,0.05,0.25,0.4";
  int horizon = 2;
  std::string config_path;
};

struct CommonOptions {
  std::string outdir = ".";
  int threads = 0;  // 0: take ROBUST_MFG_THREADS, else 1
};

struct SolverCliOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  double damping = 1.0;
  std::string init = "initial";  // or "uniform"
};

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_lambda(item));  // accepts decimals and fractions
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (double v : parse_number_list(text, what)) {
    if (v < 1 || v != static_cast<long long>(v))
      throw ConfigError(what + ": expected positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void add_game_options(CLI::App* cmd, GameOptions* game) {
  cmd->add_flag("--crowd", game->crowd, "use the built-in crowd-motion game");
  cmd->add_option("--lambda", game->lambda,
                  "uncertainty radius (decimal or fraction such as 1/3)");
  cmd->add_option("--c", game->c, "crowd-aversion constant c > 0");
  cmd->add_option("--mu0", game->mu0, "initial law, comma-separated weights");
  cmd->add_option("--T", game->horizon, "time horizon");
  cmd->add_option("--config", game->config_path, "game config JSON file");
}

void add_common_options(CLI::App* cmd, CommonOptions* common) {
  cmd->add_option("--outdir", common->outdir, "directory for output artifacts");
  cmd->add_option("--threads", common->threads,
                  "worker thread cap (default: ROBUST_MFG_THREADS or 1)");
}

void add_solver_options(CLI::App* cmd, SolverCliOptions* solver) {
  cmd->add_option("--tol", solver->tol, "flow-residual convergence threshold");
  cmd->add_option("--max-iter", solver->max_iter, "iteration cap");
  cmd->add_option("--damping", solver->damping, "flow update step in (0,1]");
  cmd->add_option("--init", solver->init,
                  "initial flow: 'initial' (constant mu0) or 'uniform'");
}

int resolve_threads(const CommonOptions& common) {
  if (common.threads > 0) return common.threads;
  if (const char* env = std::getenv("ROBUST_MFG_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

GameSpec build_game(const GameOptions& game, bool validate_rows = true) {
  const bool has_config = !game.config_path.empty();
  if (has_config == game.crowd)
    throw ConfigError(
        "game source: pass exactly one of --crowd or --config FILE");
  if (has_config) return load_game_file(game.config_path, validate_rows);
  const double lambda = parse_lambda(game.lambda);
  std::vector<double> weights = parse_number_list(game.mu0, "mu0");
  return make_crowd_game(lambda, game.c, DiscreteDistribution(std::move(weights)),
                         game.horizon);
}

MeasureFlow initial_flow(const GameSpec& spec, const SolverCliOptions& solver) {
  if (solver.init == "uniform")
    return MeasureFlow::constant(DiscreteDistribution::uniform(spec.num_states()),
                                 spec.horizon());
  if (solver.init != "initial")
    throw ConfigError("init: expected 'initial' or 'uniform'");
  return MeasureFlow::constant(spec.initial(), spec.horizon());
}

SolveOptions to_solve_options(const SolverCliOptions& solver) {
  SolveOptions opts;
  opts.tol = solver.tol;
  opts.max_iter = solver.max_iter;
  opts.damping = solver.damping;
  return opts;
}

void write_artifact(const CommonOptions& common, const std::string& name,
                    const std::string& contents) {
  std::filesystem::create_directories(common.outdir);
  write_file((std::filesystem::path(common.outdir) / name).string(), contents);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return j;
}

int run_solve(const GameOptions& game, const CommonOptions& common,
              const SolverCliOptions& solver) {
  const GameSpec spec = build_game(game);
  const Equilibrium eq = solve_mfe(spec, initial_flow(spec, solver),
                                   to_solve_options(solver));
  write_artifact(common, "equilibrium.json",
                 equilibrium_to_json(spec, eq).dump(2) + "\n");
  std::cout << "value=" << format_double(eq.value)
            << " iterations=" << eq.iterations
            << " converged=" << (eq.converged ? "yes" : "no")
            << " max_residual=" << format_double(eq.residuals.max()) << "\n";
  return eq.converged ? kExitOk : kExitNotConverged;
}

int run_evaluate(const GameOptions& game, const CommonOptions& common,
                 const SolverCliOptions& solver, const std::string& policy_path,
                 const std::string& flow_path, bool at_equilibrium) {
  const GameSpec spec = build_game(game);
  const MarkovPolicy policy = policy_from_json(spec, read_json_file(policy_path));

  MeasureFlow flow = MeasureFlow::constant(spec.initial(), spec.horizon());
  bool converged = true;
  if (at_equilibrium) {
    const Equilibrium eq =
        solve_mfe(spec, initial_flow(spec, solver), to_solve_options(solver));
    flow = eq.flow;
    converged = eq.converged;
  } else if (!flow_path.empty()) {
    flow = flow_from_json(spec, read_json_file(flow_path));
  }

  const double value = robust_policy_eval(spec, flow, policy);
  nlohmann::json out{{"value", value}};
  write_artifact(common, "evaluate.json", out.dump(2) + "\n");
  std::cout << "policy_value=" << format_double(value) << "\n";
  return converged ? kExitOk : kExitNotConverged;
}

int run_sweep(const GameOptions& game, const CommonOptions& common,
              const SolverCliOptions& solver, const std::string& lambdas_text) {
  const auto lambdas = parse_number_list(lambdas_text, "lambdas");

  std::function<GameSpec(double)> builder;
  if (!game.config_path.empty()) {
    // Config games sweep by re-drawing the ball radius around the stored
    // reference kernel.
    const GameSpec base = load_game_file(game.config_path);
    const TransitionKernelTable* reference = base.ambiguity().reference_table();
    if (base.ambiguity().kind(0) != AmbiguityKind::kWassersteinBall ||
        reference == nullptr)
      throw ConfigError(
          "sweep: the config game must use a table-backed wasserstein_ball "
          "ambiguity to sweep its radius");
    const TransitionKernelTable reference_copy = *reference;
    builder = [base, reference_copy](double lambda) {
      return GameSpec(base.states(), base.actions(), base.horizon(),
                      base.initial(), base.reward(),
                      AmbiguityFamily::wasserstein_ball(reference_copy, lambda));
    };
  } else {
    std::vector<double> weights = parse_number_list(game.mu0, "mu0");
    const DiscreteDistribution mu0(std::move(weights));
    builder = [mu0, &game](double lambda) {
      return make_crowd_game(lambda, game.c, mu0, game.horizon);
    };
  }
  const GameSpec reference_spec = builder(lambdas.front());
  const SweepTable table =
      lambda_sweep(builder, lambdas, initial_flow(reference_spec, solver),
                   to_solve_options(solver));

  write_artifact(common, "sweep.csv", sweep_to_csv(reference_spec, table));
  write_artifact(common, "kernels.csv", kernels_to_csv(reference_spec, table));
  write_artifact(common, "policies.csv", policies_to_csv(reference_spec, table));

  bool all_converged = true;
  for (const auto& row : table.rows) {
    if (!row.error.empty()) {
      std::cout << "lambda=" << format_double(row.lambda)
                << " error=" << row.error << "\n";
      all_converged = false;
      continue;
    }
    std::cout << "lambda=" << format_double(row.lambda)
              << " V=" << format_double(row.value)
              << " iterations=" << row.iterations
              << " converged=" << (row.converged ? "yes" : "no") << "\n";
    all_converged = all_converged && row.converged;
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

int run_nash_gap(const GameOptions& game, const CommonOptions& common,
                 const SolverCliOptions& solver, int num_agents, int agent_1based) {
  const GameSpec spec = build_game(game);
  const Equilibrium eq =
      solve_mfe(spec, initial_flow(spec, solver), to_solve_options(solver));
  const NAgentReport report =
      best_response_gap(spec, num_agents, agent_1based - 1, eq);
  write_artifact(common, "nagent.csv", nagent_reports_to_csv({report}));
  write_artifact(common, "nash_gap.json",
                 nagent_report_to_json(report).dump(2) + "\n");
  std::cout << "N=" << num_agents << " J_exact=" << format_double(*report.exact_value)
            << " nash_gap=" << format_double(*report.nash_gap)
            << (report.gap_is_lower_bound ? " (lower bound)" : "") << "\n";
  return eq.converged ? kExitOk : kExitNotConverged;
}

int run_simulate(const GameOptions& game, const CommonOptions& common,
                 const SolverCliOptions& solver, const std::string& agents_text,
                 long paths, std::uint64_t seed) {
  const GameSpec spec = build_game(game);
  const auto agent_counts = parse_int_list(agents_text, "N");
  const int threads = resolve_threads(common);
  const Equilibrium eq =
      solve_mfe(spec, initial_flow(spec, solver), to_solve_options(solver));

  std::vector<NAgentReport> reports;
  for (int n : agent_counts) {
    const ProfilePolicy profile = ProfilePolicy::symmetric(eq.policy, n);
    NAgentReport report = simulate_plugin(spec, n, profile, eq, paths, seed, threads);
    std::cout << "N=" << n << " J_mc=" << format_double(*report.mc_estimate)
              << " stderr=" << format_double(*report.mc_stderr) << "\n";
    reports.push_back(std::move(report));
  }
  write_artifact(common, "nagent.csv", nagent_reports_to_csv(reports));
  std::cout << "V_mfe=" << format_double(eq.value) << "\n";
  return eq.converged ? kExitOk : kExitNotConverged;
}

int run_diagnose(const GameOptions& game, const CommonOptions& common,
                 const SolverCliOptions& solver, const std::string& agents_text,
                 long paths, std::uint64_t seed) {
  const GameSpec spec = build_game(game);
  const auto agent_counts = parse_int_list(agents_text, "N");
  const int threads = resolve_threads(common);
  const Equilibrium eq =
      solve_mfe(spec, initial_flow(spec, solver), to_solve_options(solver));

  std::vector<std::pair<int, std::vector<ChaosRow>>> by_n;
  for (int n : agent_counts) {
    const ProfilePolicy profile = ProfilePolicy::symmetric(eq.policy, n);
    by_n.emplace_back(n, chaos_diagnostic(spec, n, profile, eq, paths, seed, threads));
    for (const auto& row : by_n.back().second)
      std::cout << "N=" << n << " t=" << row.t
                << " discrepancy=" << format_double(row.discrepancy) << "\n";
  }
  write_artifact(common, "chaos.csv", chaos_to_csv(by_n));
  return eq.converged ? kExitOk : kExitNotConverged;
}

int run_validate(const GameOptions& game, const CommonOptions& common) {
  const GameSpec spec = build_game(game, /*validate_rows=*/false);
  const DiagnosticsReport report = validate_assumptions(spec);
  write_artifact(common, "validate.json",
                 diagnostics_to_json(report).dump(2) + "\n");
  for (const auto& check : report.checks)
    std::cout << (check.passed ? (check.unchecked ? "[unchecked] " : "[pass] ")
                               : "[FAIL] ")
              << check.name << ": " << check.detail << "\n";
  return report.all_passed() ? kExitOk : kExitValidation;
}

}  // namespace

int cli_run(const std::vector<std::string>& args) {
  CLI::App app{"Robust mean-field Markov game solver"};
  app.require_subcommand(1);

  GameOptions game;
  CommonOptions common;
  SolverCliOptions solver;

  auto* solve_cmd = app.add_subcommand("solve", "compute a mean-field equilibrium");
  add_game_options(solve_cmd, &game);
  add_common_options(solve_cmd, &common);
  add_solver_options(solve_cmd, &solver);

  std::string policy_path, flow_path;
  bool at_equilibrium = false;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "worst-case value of a supplied policy");
  add_game_options(evaluate_cmd, &game);
  add_common_options(evaluate_cmd, &common);
  add_solver_options(evaluate_cmd, &solver);
  evaluate_cmd->add_option("--policy", policy_path, "policy JSON file")->required();
  evaluate_cmd->add_option("--flow", flow_path,
                           "measure-flow JSON file (default: constant mu0)");
  evaluate_cmd->add_flag("--at-equilibrium", at_equilibrium,
                         "evaluate at the solved equilibrium flow");

  std::string lambdas_text = "0,1/4,1/3,1/2,1";
  auto* sweep_cmd =
      app.add_subcommand("sweep", "equilibria across an uncertainty grid");
  add_game_options(sweep_cmd, &game);
  add_common_options(sweep_cmd, &common);
  add_solver_options(sweep_cmd, &solver);
  sweep_cmd->add_option("--lambdas", lambdas_text, "comma-separated radii");

  int num_agents = 2;
  int agent = 1;
  auto* gap_cmd = app.add_subcommand(
      "nash-gap", "exact best-response gap of the symmetric profile");
  add_game_options(gap_cmd, &game);
  add_common_options(gap_cmd, &common);
  add_solver_options(gap_cmd, &solver);
  gap_cmd->add_option("--N", num_agents, "number of agents");
  gap_cmd->add_option("--agent", agent, "1-based agent index");

  std::string agents_text = "2,5,10,25,50";
  long paths = 10000;
  std::uint64_t seed = 1;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "plug-in Monte Carlo over agent counts");
  add_game_options(simulate_cmd, &game);
  add_common_options(simulate_cmd, &common);
  add_solver_options(simulate_cmd, &solver);
  simulate_cmd->add_option("--N", agents_text, "comma-separated agent counts");
  simulate_cmd->add_option("--paths", paths, "Monte Carlo paths");
  simulate_cmd->add_option("--seed", seed, "RNG seed");

  auto* diagnose_cmd = app.add_subcommand(
      "diagnose", "empirical-law discrepancy against the mean-field law");
  add_game_options(diagnose_cmd, &game);
  add_common_options(diagnose_cmd, &common);
  add_solver_options(diagnose_cmd, &solver);
  diagnose_cmd->add_option("--N", agents_text, "comma-separated agent counts");
  diagnose_cmd->add_option("--paths", paths, "Monte Carlo paths");
  diagnose_cmd->add_option("--seed", seed, "RNG seed");

  auto* validate_cmd =
      app.add_subcommand("validate", "model assumption diagnostics");
  add_game_options(validate_cmd, &game);
  add_common_options(validate_cmd, &common);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("rmfg");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (solve_cmd->parsed()) return run_solve(game, common, solver);
    if (evaluate_cmd->parsed())
      return run_evaluate(game, common, solver, policy_path, flow_path,
                          at_equilibrium);
    if (sweep_cmd->parsed()) return run_sweep(game, common, solver, lambdas_text);
    if (gap_cmd->parsed())
      return run_nash_gap(game, common, solver, num_agents, agent);
    if (simulate_cmd->parsed())
      return run_simulate(game, common, solver, agents_text, paths, seed);
    if (diagnose_cmd->parsed())
      return run_diagnose(game, common, solver, agents_text, paths, seed);
    if (validate_cmd->parsed()) return run_validate(game, common);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace rmfg
