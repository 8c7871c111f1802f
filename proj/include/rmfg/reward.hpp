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

#include <optional>
#include <variant>
#include <vector>

#include "rmfg/distribution.hpp"

namespace rmfg {

/// Congestion penalty -beta * log(mu(s') + c) added to a table reward.
struct CongestionTerm {
  double beta = 1.0;
  double c = 1e-7;
};

/// Tabular reward r0[s][a][s'] with an optional congestion term and an
/// optional declared bound on |r| (checked by the assumption validator).
struct TableReward {
  std::vector<double> values;  // flattened [s][a][s']
  int num_states = 0;
  int num_actions = 0;
  std::optional<CongestionTerm> congestion;
  std::optional<double> declared_bound;

  double entry(int s, int a, int s2) const {
    return values[(static_cast<size_t>(s) * num_actions + a) * num_states + s2];
  }
};

/// Crowd-motion reward on a 1D grid centered at coordinate 2:
///   (1 - |x_{s'} - 2| / 2) - |x_a| / 4 - log(mu(s') + c).
/// Rewards reaching the center, penalizes movement and crowded targets;
/// c > 0 keeps the value finite on the whole simplex.
struct CrowdReward {
  double c = 1e-7;
};

/// One-step reward evaluator r(s, a, s', mu). An evaluator rather than a
/// plain table because the reward depends continuously on the population
/// measure mu.
class RewardModel {
 public:
  explicit RewardModel(TableReward table) : model_(std::move(table)) {}
  explicit RewardModel(CrowdReward crowd) : model_(crowd) {}

  static RewardModel constant_zero(int num_states, int num_actions);

  double eval(const FiniteSpace& states, const FiniteSpace& actions, int s,
              int a, int s2, const DiscreteDistribution& mu) const;

  bool is_crowd() const { return std::holds_alternative<CrowdReward>(model_); }
  const CrowdReward* crowd() const { return std::get_if<CrowdReward>(&model_); }
  const TableReward* table() const { return std::get_if<TableReward>(&model_); }

 private:
  std::variant<TableReward, CrowdReward> model_;
};

}  // namespace rmfg
