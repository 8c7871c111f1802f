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

#include <cmath>
#include <random>

#include "rmfg/game.hpp"
#include "rmfg/inner.hpp"
#include "support/oracles.hpp"

using namespace rmfg;

namespace {

const DiscreteDistribution kMu0({0.2, 0.1, 0.05, 0.25, 0.4});

}  // namespace

TEST_CASE("DiscreteDistribution invariants") {
  CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<double>{}),
                  std::invalid_argument);

  const auto normalized = DiscreteDistribution::normalized({2.0, 1.0, 1.0});
  CHECK(normalized[0] == doctest::Approx(0.5));
  CHECK(normalized.is_valid_simplex());

  // Tiny negative round-off is absorbed, real negatives are rejected.
  const DiscreteDistribution cleaned({1.0 + 1e-13, -1e-13});
  CHECK(cleaned[1] == 0.0);

  const auto point = DiscreteDistribution::point_mass(2, 4);
  CHECK(point[2] == 1.0);
  CHECK(DiscreteDistribution::uniform(4).is_valid_simplex());
}

TEST_CASE("crowd reference kernel rows") {
  const GameSpec spec = make_crowd_game(0.5, 1e-7, kMu0, 2);
  const auto& S = spec.states();
  const auto& A = spec.actions();
  REQUIRE(S.size() == 5);
  REQUIRE(A.size() == 3);
  CHECK(A.index_of("-1") == 0);

  const auto uniform = DiscreteDistribution::uniform(5);
  // All movement branches leave the grid or return to 0.
  const auto row_left = spec.ambiguity().reference_row(0, 0, 0, uniform);
  CHECK(row_left[0] == doctest::Approx(1.0));
  // Interior stay action spreads over the three neighbors.
  const auto row_mid = spec.ambiguity().reference_row(0, 2, 1, uniform);
  CHECK(row_mid[0] == 0.0);
  CHECK(row_mid[1] == doctest::Approx(1.0 / 3));
  CHECK(row_mid[2] == doctest::Approx(1.0 / 3));
  CHECK(row_mid[3] == doctest::Approx(1.0 / 3));
  CHECK(row_mid[4] == 0.0);
  // Right edge moving right stays put.
  const auto row_edge = spec.ambiguity().reference_row(0, 4, 2, uniform);
  CHECK(row_edge[4] == doctest::Approx(1.0));
}

TEST_CASE("crowd reference rows do not depend on the population measure") {
  const GameSpec spec = make_crowd_game(0.25, 1e-7, kMu0, 2);
  const auto mu_a = DiscreteDistribution::uniform(5);
  const auto mu_b = DiscreteDistribution::point_mass(3, 5);
  for (int t = 0; t < 2; ++t)
    for (int s = 0; s < 5; ++s)
      for (int a = 0; a < 3; ++a)
        CHECK(spec.ambiguity().reference_row(t, s, a, mu_a) ==
              spec.ambiguity().reference_row(t, s, a, mu_b));
}

TEST_CASE("make_crowd_game rejects bad parameters") {
  CHECK_THROWS_AS(make_crowd_game(-0.1, 1e-7, kMu0, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_crowd_game(0.5, 0.0, kMu0, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_crowd_game(0.5, 1e-7, DiscreteDistribution::uniform(4), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_crowd_game(0.5, 1e-7, kMu0, 0), std::invalid_argument);
}

TEST_CASE("crowd reward closed form") {
  const double c = 1e-7;
  const GameSpec spec = make_crowd_game(0.0, c, kMu0, 2);
  const auto uniform = DiscreteDistribution::uniform(5);

  // Center, stay, uniform crowd.
  const double center = spec.reward_eval(2, 1, 2, uniform);
  CHECK(center == doctest::Approx(1.0 - std::log(0.2 + c)).epsilon(1e-12));
  CHECK(center == doctest::Approx(2.609438).epsilon(1e-5));

  // Full mass at the target cancels the crowding term.
  const DiscreteDistribution packed({0.0, 0.0, 1.0 - c, c, 0.0});
  CHECK(spec.reward_eval(0, 2, 2, packed) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("crowd reward decreases in the target occupancy") {
  const GameSpec spec = make_crowd_game(0.0, 1e-7, kMu0, 2);
  for (int target = 0; target < 5; ++target) {
    double previous = std::numeric_limits<double>::infinity();
    for (double mass : {0.0, 0.2, 0.5, 0.9}) {
      std::vector<double> w(5, (1.0 - mass) / 4.0);
      w[target] = mass;
      const double r =
          spec.reward_eval(2, 1, target, DiscreteDistribution::normalized(w));
      CHECK(r < previous);
      previous = r;
    }
  }
}

TEST_CASE("zero table reward evaluates to zero") {
  TableReward zero;
  zero.num_states = 3;
  zero.num_actions = 2;
  zero.values.assign(3 * 2 * 3, 0.0);
  const FiniteSpace S = FiniteSpace::grid_1d({0, 1, 2});
  const FiniteSpace A = FiniteSpace::grid_1d({0, 1});
  const RewardModel model(std::move(zero));
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a)
      for (int s2 = 0; s2 < 3; ++s2)
        CHECK(model.eval(S, A, s, a, s2, DiscreteDistribution::uniform(3)) == 0.0);
}

TEST_CASE("wasserstein ball at radius zero behaves like the singleton family") {
  const GameSpec ball_game = make_crowd_game(0.0, 1e-7, kMu0, 2);
  const GameSpec singleton_game(
      ball_game.states(), ball_game.actions(), 2, kMu0,
      RewardModel(CrowdReward{1e-7}),
      AmbiguityFamily::singleton(*ball_game.ambiguity().reference_table()));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> f_dist(-3.0, 3.0);
  const auto mu = DiscreteDistribution::uniform(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> f(5);
    for (double& v : f) v = f_dist(rng);
    const int s = trial % 5;
    const int a = trial % 3;
    const auto ball = worst_case_expectation(
        f, ball_game.ambiguity_instance(0, s, a, mu));
    const auto single = worst_case_expectation(
        f, singleton_game.ambiguity_instance(0, s, a, mu));
    CHECK(ball.value == single.value);
    CHECK(ball.minimizer == single.minimizer);
  }
}

TEST_CASE("validate_assumptions on the crowd game") {
  const GameSpec spec = make_crowd_game(1.0, 1e-7, kMu0, 2);
  const DiagnosticsReport report = validate_assumptions(spec);
  CHECK(report.all_passed());
  const double expected_bound =
      17.0 / 4.0 + std::max(-std::log(1e-7), std::log1p(1e-7));
  CHECK(report.reward_bound == doctest::Approx(expected_bound).epsilon(1e-12));
  CHECK(report.reward_bound == doctest::Approx(4.25 + 16.1181).epsilon(1e-4));
}

TEST_CASE("validate_assumptions flags a violated declared bound") {
  const FiniteSpace S = FiniteSpace::grid_1d({0, 1});
  const FiniteSpace A = FiniteSpace::grid_1d({0});
  TableReward table;
  table.num_states = 2;
  table.num_actions = 1;
  table.values = {5.0, 0.0, 0.0, 0.0};
  table.declared_bound = 1.0;
  TransitionKernelTable ref(1, 2, 1);
  const GameSpec spec(S, A, 1, DiscreteDistribution::uniform(2),
                      RewardModel(std::move(table)),
                      AmbiguityFamily::singleton(std::move(ref)));
  const DiagnosticsReport report = validate_assumptions(spec);
  CHECK(!report.all_passed());
  bool bound_failed = false;
  for (const auto& check : report.checks)
    if (check.name == "reward-bound") bound_failed = !check.passed;
  CHECK(bound_failed);
}

TEST_CASE("validate_assumptions flags a sub-stochastic kernel row") {
  const FiniteSpace S = FiniteSpace::grid_1d({0, 1});
  const FiniteSpace A = FiniteSpace::grid_1d({0});
  TransitionKernelTable ref(1, 2, 1);
  ref.set(0, 0, 0, DiscreteDistribution::unchecked({0.5, 0.4}));  // sums to 0.9
  const GameSpec spec(S, A, 1, DiscreteDistribution::uniform(2),
                      RewardModel::constant_zero(2, 1),
                      AmbiguityFamily::wasserstein_ball(std::move(ref), 0.1));
  const DiagnosticsReport report = validate_assumptions(spec);
  CHECK(!report.all_passed());
  bool simplex_failed = false;
  for (const auto& check : report.checks)
    if (check.name == "simplex-rows") simplex_failed = !check.passed;
  CHECK(simplex_failed);
}

TEST_CASE("validate_assumptions reports mu-dependent references as unchecked") {
  const FiniteSpace S = FiniteSpace::grid_1d({0, 1});
  const FiniteSpace A = FiniteSpace::grid_1d({0});
  const KernelGenerator generator = [](int, int, int,
                                       const DiscreteDistribution& mu) {
    return DiscreteDistribution({0.5 * (1.0 + mu[0]), 0.5 * (1.0 - mu[0])});
  };
  const GameSpec spec(S, A, 1, DiscreteDistribution::uniform(2),
                      RewardModel::constant_zero(2, 1),
                      AmbiguityFamily::wasserstein_ball(generator, 0.1, 1, 2, 1));
  const DiagnosticsReport report = validate_assumptions(spec);
  CHECK(report.all_passed());  // unchecked is not a failure
  bool unchecked = false;
  for (const auto& check : report.checks)
    if (check.name == "ambiguity-mu-independence") unchecked = check.unchecked;
  CHECK(unchecked);
}
