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

#include "rmfg/policy.hpp"

#include <stdexcept>

namespace rmfg {

MarkovPolicy::MarkovPolicy(int horizon, int num_states, int num_actions)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0)
    throw std::invalid_argument("MarkovPolicy: non-positive dimension");
  rows_.assign(static_cast<size_t>(horizon) * num_states,
               DiscreteDistribution::uniform(num_actions));
}

MarkovPolicy MarkovPolicy::uniform(int horizon, int num_states, int num_actions) {
  return MarkovPolicy(horizon, num_states, num_actions);
}

MarkovPolicy MarkovPolicy::deterministic(
    int num_actions, const std::vector<std::vector<int>>& choice) {
  const int horizon = static_cast<int>(choice.size());
  if (horizon == 0) throw std::invalid_argument("MarkovPolicy: empty choice table");
  const int num_states = static_cast<int>(choice.front().size());
  MarkovPolicy policy(horizon, num_states, num_actions);
  for (int t = 0; t < horizon; ++t) {
    if (static_cast<int>(choice[t].size()) != num_states)
      throw std::invalid_argument("MarkovPolicy: ragged choice table");
    for (int s = 0; s < num_states; ++s)
      policy.set(t, s, DiscreteDistribution::point_mass(choice[t][s], num_actions));
  }
  return policy;
}

void MarkovPolicy::set(int t, int s, DiscreteDistribution row) {
  if (row.size() != num_actions_)
    throw std::invalid_argument("MarkovPolicy: row size mismatch");
  rows_.at(static_cast<size_t>(t) * num_states_ + s) = std::move(row);
}

TransitionKernelTable::TransitionKernelTable(int horizon, int num_states,
                                             int num_actions)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0)
    throw std::invalid_argument("TransitionKernelTable: non-positive dimension");
  rows_.assign(static_cast<size_t>(horizon) * num_states * num_actions,
               DiscreteDistribution::uniform(num_states));
}

void TransitionKernelTable::set(int t, int s, int a, DiscreteDistribution row) {
  if (row.size() != num_states_)
    throw std::invalid_argument("TransitionKernelTable: row size mismatch");
  rows_.at((static_cast<size_t>(t) * num_states_ + s) * num_actions_ + a) =
      std::move(row);
}

MeasureFlow::MeasureFlow(std::vector<DiscreteDistribution> measures)
    : measures_(std::move(measures)) {
  if (measures_.empty()) throw std::invalid_argument("MeasureFlow: empty flow");
  for (const auto& mu : measures_) {
    if (mu.size() != measures_.front().size())
      throw std::invalid_argument("MeasureFlow: inconsistent support sizes");
  }
}

MeasureFlow MeasureFlow::constant(const DiscreteDistribution& mu, int horizon) {
  if (horizon <= 0) throw std::invalid_argument("MeasureFlow: non-positive horizon");
  return MeasureFlow(std::vector<DiscreteDistribution>(
      static_cast<size_t>(horizon), mu));
}

double MeasureFlow::linf_distance(const MeasureFlow& other) const {
  double m = 0.0;
  for (size_t t = 0; t < measures_.size(); ++t)
    m = std::max(m, measures_[t].linf_distance(other.measures_[t]));
  return m;
}

}  // namespace rmfg
