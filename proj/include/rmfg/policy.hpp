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

#include <vector>

#include "rmfg/distribution.hpp"

namespace rmfg {

/// Time-indexed Markov policy: for every decision time t in {0..T-1} and
/// state s, a distribution over actions.
class MarkovPolicy {
 public:
  /// Empty placeholder (zero horizon).
  MarkovPolicy() = default;

  MarkovPolicy(int horizon, int num_states, int num_actions);

  static MarkovPolicy uniform(int horizon, int num_states, int num_actions);
  /// Point mass on choice[t][s] at every (t, s).
  static MarkovPolicy deterministic(int num_actions,
                                    const std::vector<std::vector<int>>& choice);

  const DiscreteDistribution& at(int t, int s) const {
    return rows_[static_cast<size_t>(t) * num_states_ + s];
  }
  void set(int t, int s, DiscreteDistribution row);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  bool operator==(const MarkovPolicy& other) const = default;

 private:
  int horizon_ = 0, num_states_ = 0, num_actions_ = 0;
  std::vector<DiscreteDistribution> rows_;
};

/// Per (t, s, a) a distribution over next states. Houses both reference
/// kernels and worst-case selectors.
class TransitionKernelTable {
 public:
  /// Empty placeholder (zero horizon).
  TransitionKernelTable() = default;

  TransitionKernelTable(int horizon, int num_states, int num_actions);

  const DiscreteDistribution& at(int t, int s, int a) const {
    return rows_[(static_cast<size_t>(t) * num_states_ + s) * num_actions_ + a];
  }
  void set(int t, int s, int a, DiscreteDistribution row);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  bool operator==(const TransitionKernelTable& other) const = default;

 private:
  int horizon_ = 0, num_states_ = 0, num_actions_ = 0;
  std::vector<DiscreteDistribution> rows_;
};

/// State-measure flow mu_{0:T}: one distribution over states per decision
/// time t in {0..T-1}.
class MeasureFlow {
 public:
  /// Empty placeholder (zero horizon).
  MeasureFlow() = default;

  explicit MeasureFlow(std::vector<DiscreteDistribution> measures);
  /// Constant flow mu_t = mu for every t.
  static MeasureFlow constant(const DiscreteDistribution& mu, int horizon);

  int horizon() const { return static_cast<int>(measures_.size()); }
  const DiscreteDistribution& at(int t) const { return measures_[t]; }
  void set(int t, DiscreteDistribution mu) { measures_[t] = std::move(mu); }

  double linf_distance(const MeasureFlow& other) const;

  bool operator==(const MeasureFlow& other) const = default;

 private:
  std::vector<DiscreteDistribution> measures_;
};

}  // namespace rmfg
