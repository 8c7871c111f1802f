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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rmfg/mfe.hpp"
#include "rmfg/serialize.hpp"
#include "support/oracles.hpp"

using namespace rmfg;

namespace {

const DiscreteDistribution kMu0({0.2, 0.1, 0.05, 0.25, 0.4});
const std::vector<double> kLambdaGrid = {0.0, 0.25, 1.0 / 3, 0.5, 1.0};

Equilibrium solve_crowd(double lambda, int horizon = 2) {
  const GameSpec spec = make_crowd_game(lambda, 1e-7, kMu0, horizon);
  return solve_mfe(spec, MeasureFlow::constant(kMu0, horizon));
}

}  // namespace

TEST_CASE("horizon one converges in a single iteration") {
  const GameSpec spec = make_crowd_game(0.5, 1e-7, kMu0, 1);
  const Equilibrium eq = solve_mfe(spec, MeasureFlow::constant(kMu0, 1));
  CHECK(eq.converged);
  CHECK(eq.iterations == 1);
  CHECK(eq.flow.at(0) == kMu0);
  CHECK(eq.value ==
        doctest::Approx(value_of_flow(spec, eq.flow)).epsilon(1e-14));
}

TEST_CASE("equilibrium flow starts at the initial law and stays on the simplex") {
  for (double lambda : kLambdaGrid) {
    const Equilibrium eq = solve_crowd(lambda);
    CHECK(eq.flow.at(0) == kMu0);
    for (int t = 0; t < eq.flow.horizon(); ++t)
      CHECK(eq.flow.at(t).is_valid_simplex(1e-9));
  }
}

TEST_CASE("crowd equilibria satisfy the equilibrium conditions on the grid") {
  for (double lambda : kLambdaGrid) {
    const GameSpec spec = make_crowd_game(lambda, 1e-7, kMu0, 2);
    const Equilibrium eq = solve_mfe(spec, MeasureFlow::constant(kMu0, 2));
    CHECK(eq.converged);
    CHECK(eq.residuals.max() <= 1e-8);
    CHECK(check_fixed_point(spec, induced_joint_laws(eq.flow, eq.policy)).passed);
  }
}

TEST_CASE("without uncertainty the crowd gathers at the center") {
  const Equilibrium eq = solve_crowd(0.0);
  REQUIRE(eq.converged);
  const auto& mu1 = eq.flow.at(1);
  int argmax = 0;
  for (int s = 1; s < 5; ++s)
    if (mu1[s] > mu1[argmax]) argmax = s;
  CHECK(argmax == 2);
}

TEST_CASE("large uncertainty pushes mass to the boundary") {
  const Equilibrium calm = solve_crowd(0.0);
  const Equilibrium worried = solve_crowd(1.0);
  REQUIRE(calm.converged);
  REQUIRE(worried.converged);
  const double calm_boundary = calm.flow.at(1)[0] + calm.flow.at(1)[4];
  const double worried_boundary = worried.flow.at(1)[0] + worried.flow.at(1)[4];
  CHECK(worried_boundary > calm_boundary);
}

TEST_CASE("no-uncertainty equilibrium matches the classical fixed point") {
  const GameSpec spec = make_crowd_game(0.0, 1e-7, kMu0, 2);
  const Equilibrium eq = solve_mfe(spec, MeasureFlow::constant(kMu0, 2));
  REQUIRE(eq.converged);

  std::vector<std::vector<double>> kernel_rows(2 * 5 * 3);
  for (int t = 0; t < 2; ++t)
    for (int s = 0; s < 5; ++s)
      for (int a = 0; a < 3; ++a)
        kernel_rows[(t * 5 + s) * 3 + a] =
            spec.ambiguity()
                .reference_row(t, s, a, DiscreteDistribution::uniform(5))
                .weights();
  const auto kernel = [&](int t, int s, int a) -> const std::vector<double>& {
    return kernel_rows[(t * 5 + s) * 3 + a];
  };
  const auto classical = testing::classical_mfg_solve(
      2, 5, 3,
      [&](int s, int a, int s2, const std::vector<double>& mu) {
        return spec.reward_eval(s, a, s2,
                                DiscreteDistribution::unchecked(
                                    std::vector<double>(mu)));
      },
      kernel, kMu0.weights());
  REQUIRE(classical.converged);
  for (int t = 0; t < 2; ++t)
    for (int s = 0; s < 5; ++s)
      CHECK(std::abs(eq.flow.at(t)[s] - classical.flow[t][s]) <= 1e-12);
  CHECK(std::abs(eq.value - classical.value) <= 1e-12);
}

TEST_CASE("lambda sweep value column is non-increasing with a strict drop") {
  const auto builder = [&](double lambda) {
    return make_crowd_game(lambda, 1e-7, kMu0, 2);
  };
  const SweepTable table = lambda_sweep(builder, kLambdaGrid,
                                        MeasureFlow::constant(kMu0, 2));
  REQUIRE(table.rows.size() == kLambdaGrid.size());
  bool strict = false;
  for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
    CHECK(table.rows[i + 1].value <= table.rows[i].value + 1e-10);
    strict = strict || table.rows[i + 1].value < table.rows[i].value - 1e-6;
  }
  CHECK(strict);
  for (const auto& row : table.rows) CHECK(row.converged);
}

TEST_CASE("sweep rows are deterministic") {
  const auto builder = [&](double lambda) {
    return make_crowd_game(lambda, 1e-7, kMu0, 2);
  };
  const std::vector<double> twice = {0.3, 0.3};
  const SweepTable table =
      lambda_sweep(builder, twice, MeasureFlow::constant(kMu0, 2));
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].value == table.rows[1].value);
  CHECK(table.rows[0].mu1 == table.rows[1].mu1);
  CHECK(table.rows[0].mu_terminal == table.rows[1].mu_terminal);
  CHECK(table.rows[0].iterations == table.rows[1].iterations);

  // And a full re-run reproduces the CSV byte for byte.
  const GameSpec spec = builder(0.3);
  const SweepTable again =
      lambda_sweep(builder, twice, MeasureFlow::constant(kMu0, 2));
  CHECK(sweep_to_csv(spec, table) == sweep_to_csv(spec, again));
}

TEST_CASE("terminal distribution is one extra pushforward") {
  const GameSpec spec = make_crowd_game(0.25, 1e-7, kMu0, 2);
  const Equilibrium eq = solve_mfe(spec, MeasureFlow::constant(kMu0, 2));
  const DiscreteDistribution terminal = terminal_distribution(spec, eq);
  const DiscreteDistribution expected =
      push_forward(eq.flow.at(1), eq.policy, eq.kernel, 1);
  CHECK(terminal == expected);
  CHECK(terminal.is_valid_simplex(1e-9));
}

TEST_CASE("solve options are validated") {
  const GameSpec spec = make_crowd_game(0.0, 1e-7, kMu0, 2);
  SolveOptions opts;
  opts.tol = 0.0;
  CHECK_THROWS_AS(solve_mfe(spec, MeasureFlow::constant(kMu0, 2), opts),
                  std::invalid_argument);
  opts = SolveOptions{};
  opts.damping = 1.5;
  CHECK_THROWS_AS(solve_mfe(spec, MeasureFlow::constant(kMu0, 2), opts),
                  std::invalid_argument);
}

TEST_CASE("non-convergence is reported, not thrown") {
  const GameSpec spec = make_crowd_game(1.0, 1e-7, kMu0, 2);
  SolveOptions opts;
  opts.max_iter = 3;  // far too few for this radius
  const Equilibrium eq = solve_mfe(spec, MeasureFlow::constant(kMu0, 2), opts);
  CHECK(!eq.converged);
  CHECK(eq.residual_trace.size() >= 1);
}
