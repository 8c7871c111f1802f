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

#include <string>
#include <vector>

#include "rmfg/ambiguity.hpp"
#include "rmfg/distribution.hpp"
#include "rmfg/policy.hpp"
#include "rmfg/reward.hpp"
#include "rmfg/transport.hpp"

namespace rmfg {

/// A full mean-field game instance: spaces, horizon, initial law, reward
/// evaluator and the ambiguity-set family. Immutable after construction;
/// all operations on it are pure.
class GameSpec {
 public:
  GameSpec(FiniteSpace states, FiniteSpace actions, int horizon,
           DiscreteDistribution initial, RewardModel reward,
           AmbiguityFamily ambiguity);

  const FiniteSpace& states() const { return states_; }
  const FiniteSpace& actions() const { return actions_; }
  int num_states() const { return states_.size(); }
  int num_actions() const { return actions_.size(); }
  int horizon() const { return horizon_; }
  const DiscreteDistribution& initial() const { return initial_; }
  const RewardModel& reward() const { return reward_; }
  const AmbiguityFamily& ambiguity() const { return ambiguity_; }
  const CostMatrix& state_cost() const { return state_cost_; }

  double reward_eval(int s, int a, int s2, const DiscreteDistribution& mu) const {
    return reward_.eval(states_, actions_, s, a, s2, mu);
  }

  AmbiguityInstance ambiguity_instance(int t, int s, int a,
                                       const DiscreteDistribution& mu) const {
    return ambiguity_.instance(t, s, a, mu, state_cost_);
  }

  bool has_model_uncertainty() const {
    return !ambiguity_.is_effectively_singleton();
  }

 private:
  FiniteSpace states_;
  FiniteSpace actions_;
  int horizon_;
  DiscreteDistribution initial_;
  RewardModel reward_;
  AmbiguityFamily ambiguity_;
  CostMatrix state_cost_;
};

/// Builds the crowd-motion game on the 5-point grid S = {0..4} with actions
/// A = {-1, 0, 1}: crowd reward with aversion parameter c and a W1 ball of
/// radius lambda around the random-walk reference kernel. Under the
/// reference, the next state is s + a + eps with eps uniform on {-1, 0, 1};
/// any branch leaving the grid stays at s instead.
GameSpec make_crowd_game(double lambda, double c,
                         const DiscreteDistribution& initial, int horizon);

/// One validation check: named, pass/fail/unchecked plus a detail line.
struct DiagnosticCheck {
  std::string name;
  bool passed = true;
  bool unchecked = false;
  std::string detail;
};

struct DiagnosticsReport {
  std::vector<DiagnosticCheck> checks;
  double reward_bound = 0.0;  // bound on |r| certified or computed

  bool all_passed() const;
  std::vector<std::string> failures() const;
};

/// Checks the standing model assumptions on a concrete instance: stored
/// rows are simplex-valid, the reward is bounded (for the crowd reward, by
/// 17/4 + max{-log c, log(1+c)}), and W1-ball families have mu-independent
/// reference rows. Returns a failure list instead of aborting.
DiagnosticsReport validate_assumptions(const GameSpec& spec);

}  // namespace rmfg
