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

#include "rmfg/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace rmfg {

RewardModel RewardModel::constant_zero(int num_states, int num_actions) {
  TableReward t;
  t.num_states = num_states;
  t.num_actions = num_actions;
  t.values.assign(
      static_cast<size_t>(num_states) * num_actions * num_states, 0.0);
  return RewardModel(std::move(t));
}

double RewardModel::eval(const FiniteSpace& states, const FiniteSpace& actions,
                         int s, int a, int s2,
                         const DiscreteDistribution& mu) const {
  if (s < 0 || s >= states.size() || s2 < 0 || s2 >= states.size())
    throw std::invalid_argument("RewardModel: state out of range");
  if (a < 0 || a >= actions.size())
    throw std::invalid_argument("RewardModel: action out of range");
  if (mu.size() != states.size())
    throw std::invalid_argument("RewardModel: measure support mismatch");

  if (const CrowdReward* crowd = std::get_if<CrowdReward>(&model_)) {
    const double x_next = states.coord1(s2);
    const double x_act = actions.coord1(a);
    return (1.0 - 0.5 * std::abs(x_next - 2.0)) - 0.25 * std::abs(x_act) -
           std::log(mu[s2] + crowd->c);
  }
  const TableReward& table = std::get<TableReward>(model_);
  double r = table.entry(s, a, s2);
  if (table.congestion) {
    r -= table.congestion->beta * std::log(mu[s2] + table.congestion->c);
  }
  return r;
}

}  // namespace rmfg
