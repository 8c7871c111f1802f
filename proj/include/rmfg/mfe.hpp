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

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rmfg/dpp.hpp"
#include "rmfg/game.hpp"

namespace rmfg {

/// Knobs for the fixed-point iteration. The convergence criterion is the
/// max over t of the Linf residual of the flow equation.
struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  /// Step size of the damped update mu <- (1-a) mu + a mu_new. Halved down
  /// to 1/16 when the residual sequence stops decreasing over cycle_window
  /// consecutive iterations.
  double damping = 1.0;
  int cycle_window = 20;
  InnerBackend backend = InnerBackend::kGreedy;
};

/// A computed mean-field equilibrium: the flow, the optimal policy, the
/// worst-case kernel, verification residuals, and solver bookkeeping. The
/// embedded SolveResult holds the value tables of the final backward pass
/// (needed by downstream consumers such as the plug-in simulator).
struct Equilibrium {
  MeasureFlow flow;
  MarkovPolicy policy;
  TransitionKernelTable kernel;
  SolveResult solve;
  ResidualReport residuals;
  double value = 0.0;  // V at the equilibrium flow
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_trace;  // flow residual per iteration

  EquilibriumCandidate candidate() const { return {flow, policy, kernel}; }
};

/// Fixed-point iteration for a mean-field equilibrium: repeat backward
/// induction at the current flow, then push mu forward through the selected
/// (policy, kernel) pair, until the flow stops changing. mu_0 is pinned to
/// the game's initial law throughout; init supplies the remaining entries.
/// Non-convergence is not an error: the last iterate is returned with
/// converged = false and its residuals attached.
Equilibrium solve_mfe(const GameSpec& spec, const MeasureFlow& init,
                      const SolveOptions& opts = {});

struct SweepRow {
  double lambda = 0.0;
  double value = 0.0;              // V at the equilibrium flow
  DiscreteDistribution mu1;        // flow at t = 1 (terminal pushforward if T = 1)
  DiscreteDistribution mu_terminal;  // one extra pushforward past the horizon
  int iterations = 0;
  bool converged = false;
  std::string error;  // non-empty when this radius failed outright
  Equilibrium equilibrium;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// Solves the game builder(lambda) for every lambda in the list and records
/// the equilibrium value and the flow snapshots used by the sensitivity
/// tables. Per-lambda non-convergence is recorded in the row, not thrown.
SweepTable lambda_sweep(const std::function<GameSpec(double)>& builder,
                        std::span<const double> lambdas,
                        const MeasureFlow& init, const SolveOptions& opts = {});

/// The distribution one step past the last decision time, obtained by a
/// single extra application of the flow equation at t = T-1.
DiscreteDistribution terminal_distribution(const GameSpec& spec,
                                           const Equilibrium& eq);

}  // namespace rmfg
