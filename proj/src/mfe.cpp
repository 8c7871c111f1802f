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

#include "rmfg/mfe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmfg {

namespace {

void check_options(const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("SolveOptions: tol must be > 0");
  if (opts.max_iter < 1)
    throw std::invalid_argument("SolveOptions: max_iter must be >= 1");
  if (!(opts.damping > 0.0) || opts.damping > 1.0)
    throw std::invalid_argument("SolveOptions: damping must lie in (0, 1]");
  if (opts.cycle_window < 2)
    throw std::invalid_argument("SolveOptions: cycle_window must be >= 2");
}

// The flow a (policy, kernel) selection induces from the initial law; this
// is the right-hand side of the equilibrium flow equation.
MeasureFlow induced_flow(const GameSpec& spec, const MarkovPolicy& policy,
                         const TransitionKernelTable& kernel) {
  std::vector<DiscreteDistribution> measures;
  measures.reserve(spec.horizon());
  measures.push_back(spec.initial());
  for (int t = 0; t + 1 < spec.horizon(); ++t)
    measures.push_back(push_forward(measures.back(), policy, kernel, t));
  return MeasureFlow(std::move(measures));
}

// A flow-relevant action flip between the two phases of a detected cycle.
struct TieSite {
  int t = 0;
  int s = 0;
  int action_a = 0;  // argmax on one side of the boundary
  int action_b = 0;  // argmax on the other side
};

// The plain iteration cycles when the argmax policy jumps across a value
// tie: no deterministic policy reproduces its own flow, but an
// argmax-supported mixture at the tied states does. This resolver
// parameterizes the flipped rows by a shared mixing weight, relaxes the
// flow to the mixture's fixed point, and bisects the weight until the tied
// actions' values agree, yielding a randomized-maximizer equilibrium.
struct CycleResolver {
  const GameSpec& spec;
  const SolveOptions& opts;

  struct Outcome {
    bool success = false;
    MeasureFlow flow;
    SolveResult solve;
    MarkovPolicy policy;
    int passes = 0;  // backward passes spent
  };

  MarkovPolicy mixed_policy(const SolveResult& at_flow,
                            const std::vector<TieSite>& sites,
                            double theta) const {
    MarkovPolicy policy = at_flow.optimal_policy;
    for (const auto& site : sites) {
      std::vector<double> row(spec.num_actions(), 0.0);
      row[site.action_a] += 1.0 - theta;
      row[site.action_b] += theta;
      policy.set(site.t, site.s, DiscreteDistribution(std::move(row)));
    }
    return policy;
  }

  // Relax the flow under the theta-mixture until it settles; returns the
  // value gap (action_b minus action_a) at the primary tie site.
  double relax(double theta, const std::vector<TieSite>& sites,
               MeasureFlow& flow, SolveResult& solve, int& passes) const {
    for (int j = 0; j < 200; ++j) {
      const MarkovPolicy policy = mixed_policy(solve, sites, theta);
      const MeasureFlow target = induced_flow(spec, policy, solve.worst_kernel);
      const double resid = target.linf_distance(flow);
      flow = target;
      solve = backward_induction(spec, flow, opts.backend);
      ++passes;
      if (resid <= opts.tol) break;
    }
    const auto& site = sites.front();
    return solve.q_values[site.t][site.s][site.action_b] -
           solve.q_values[site.t][site.s][site.action_a];
  }

  Outcome attempt(const MeasureFlow& start) const {
    Outcome out;
    // Identify the two phases of the cycle from the current iterate.
    SolveResult solve_a = backward_induction(spec, start, opts.backend);
    const MeasureFlow flow_b =
        induced_flow(spec, solve_a.optimal_policy, solve_a.worst_kernel);
    SolveResult solve_b = backward_induction(spec, flow_b, opts.backend);
    out.passes = 2;

    std::vector<TieSite> sites;
    for (int t = 0; t + 1 < spec.horizon(); ++t) {
      for (int s = 0; s < spec.num_states(); ++s) {
        int a_a = 0, a_b = 0;
        for (int a = 1; a < spec.num_actions(); ++a) {
          if (solve_a.q_values[t][s][a] > solve_a.q_values[t][s][a_a]) a_a = a;
          if (solve_b.q_values[t][s][a] > solve_b.q_values[t][s][a_b]) a_b = a;
        }
        if (a_a != a_b) sites.push_back({t, s, a_a, a_b});
      }
    }
    if (sites.empty()) return out;

    MeasureFlow flow = start;
    SolveResult solve = std::move(solve_a);
    double theta = 0.0;
    double gap_lo = relax(theta, sites, flow, solve, out.passes);
    if (std::abs(gap_lo) > 1e-12) {
      double lo = 0.0, hi = 1.0;
      const double gap_hi = relax(hi, sites, flow, solve, out.passes);
      if (gap_lo * gap_hi > 0.0) return out;  // no bracket, give up
      for (int step = 0; step < 80; ++step) {
        theta = 0.5 * (lo + hi);
        const double gap = relax(theta, sites, flow, solve, out.passes);
        if (std::abs(gap) <= 1e-12) break;
        if (gap * gap_lo > 0.0) {
          lo = theta;
          gap_lo = gap;
        } else {
          hi = theta;
        }
      }
    }

    // Keep the mixture only where the tie is genuine at the final flow;
    // a residual gap means that site wanted a pure row after all.
    std::vector<TieSite> genuine;
    for (const auto& site : sites) {
      if (std::abs(solve.q_values[site.t][site.s][site.action_b] -
                   solve.q_values[site.t][site.s][site.action_a]) <= 1e-8)
        genuine.push_back(site);
    }
    MarkovPolicy policy = mixed_policy(solve, genuine, theta);
    MeasureFlow target = induced_flow(spec, policy, solve.worst_kernel);
    const double resid = target.linf_distance(flow);
    if (resid > opts.tol) return out;

    out.success = true;
    out.flow = std::move(flow);
    out.solve = std::move(solve);
    out.policy = std::move(policy);
    return out;
  }
};

}  // namespace

Equilibrium solve_mfe(const GameSpec& spec, const MeasureFlow& init,
                      const SolveOptions& opts) {
  check_options(opts);
  if (init.horizon() != spec.horizon())
    throw std::invalid_argument("solve_mfe: init flow horizon mismatch");

  // mu_0 is pinned to the initial law; the rest of init seeds the iteration.
  MeasureFlow flow = init;
  flow.set(0, spec.initial());

  double alpha = opts.damping;
  std::vector<double> trace;
  trace.reserve(64);

  SolveResult solve = backward_induction(spec, flow, opts.backend);
  MarkovPolicy policy = solve.optimal_policy;
  bool converged = false;
  int iterations = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  int best_at = 0;
  bool resolver_spent = false;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    iterations = iter;
    const MeasureFlow target =
        induced_flow(spec, solve.optimal_policy, solve.worst_kernel);

    // Residual of the flow equation at the current iterate (undamped).
    const double residual = target.linf_distance(flow);
    trace.push_back(residual);
    if (residual <= opts.tol) {
      converged = true;
      policy = solve.optimal_policy;
      break;
    }
    if (residual < best_residual) {
      best_residual = residual;
      best_at = iter;
    }

    // Stalled: the residual has stopped improving over a whole window. The
    // iteration is cycling, so first damp the flow update; once the step is
    // already at its floor, try to resolve the cycle as an argmax tie.
    if (iter - best_at >= opts.cycle_window) {
      if (alpha > 1.0 / 16.0) {
        alpha = std::max(alpha / 2.0, 1.0 / 16.0);
        best_at = iter;  // give the smaller step a fresh window
      } else if (!resolver_spent) {
        resolver_spent = true;
        const auto outcome = CycleResolver{spec, opts}.attempt(flow);
        iterations += outcome.passes;
        if (outcome.success) {
          flow = outcome.flow;
          solve = outcome.solve;
          policy = outcome.policy;
          converged = true;
          trace.push_back(
              induced_flow(spec, policy, solve.worst_kernel).linf_distance(flow));
          break;
        }
      } else {
        break;  // nothing further to try
      }
    }

    for (int t = 1; t < spec.horizon(); ++t) {
      if (alpha == 1.0) {
        flow.set(t, target.at(t));
        continue;
      }
      std::vector<double> blended(spec.num_states());
      for (int s = 0; s < spec.num_states(); ++s)
        blended[s] = (1.0 - alpha) * flow.at(t)[s] + alpha * target.at(t)[s];
      flow.set(t, DiscreteDistribution(std::move(blended)));
    }
    solve = backward_induction(spec, flow, opts.backend);
    policy = solve.optimal_policy;
  }

  Equilibrium eq;
  eq.flow = std::move(flow);
  eq.policy = std::move(policy);
  eq.kernel = solve.worst_kernel;
  eq.value = solve.flow_value;
  eq.solve = std::move(solve);
  eq.iterations = iterations;
  eq.converged = converged;
  eq.residual_trace = std::move(trace);
  eq.residuals = check_mfe(spec, eq.candidate(), 1e-9, opts.backend);
  return eq;
}

DiscreteDistribution terminal_distribution(const GameSpec& spec,
                                           const Equilibrium& eq) {
  const int t = spec.horizon() - 1;
  return push_forward(eq.flow.at(t), eq.policy, eq.kernel, t);
}

SweepTable lambda_sweep(const std::function<GameSpec(double)>& builder,
                        std::span<const double> lambdas,
                        const MeasureFlow& init, const SolveOptions& opts) {
  SweepTable table;
  table.rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    SweepRow row;
    row.lambda = lambda;
    try {
      const GameSpec spec = builder(lambda);
      Equilibrium eq = solve_mfe(spec, init, opts);
      row.value = eq.value;
      row.mu_terminal = terminal_distribution(spec, eq);
      row.mu1 = spec.horizon() >= 2 ? eq.flow.at(1) : row.mu_terminal;
      row.iterations = eq.iterations;
      row.converged = eq.converged;
      row.equilibrium = std::move(eq);
    } catch (const std::exception& e) {
      row.converged = false;
      row.error = e.what();
      row.value = std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rmfg
