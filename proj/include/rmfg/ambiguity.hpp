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
#include <memory>
#include <optional>
#include <vector>

#include "rmfg/distribution.hpp"
#include "rmfg/policy.hpp"
#include "rmfg/transport.hpp"

namespace rmfg {

enum class AmbiguityKind { kSingleton, kFiniteSet, kWassersteinBall };

/// The realized constraint set at one (t, s, a, mu): what the adversary may
/// pick the next-state law from. A singleton, a finite list of candidate
/// rows, or a 1-Wasserstein ball around a reference row.
struct AmbiguityInstance {
  AmbiguityKind kind = AmbiguityKind::kSingleton;
  DiscreteDistribution reference;              // singleton and ball
  std::vector<DiscreteDistribution> members;   // finite set
  double radius = 0.0;                         // ball
  const CostMatrix* cost = nullptr;            // ball ground metric
};

/// Generates the reference row p(.|s, a, mu) at time t. The mu argument is
/// part of the interface even though every built-in family ignores it.
using KernelGenerator = std::function<DiscreteDistribution(
    int t, int s, int a, const DiscreteDistribution& mu)>;

/// The ambiguity-set family: one set-valued map per decision time. Families
/// may mix variants across times, although the built-in constructors use a
/// single variant throughout.
class AmbiguityFamily {
 public:
  /// No uncertainty: the set is {reference row} everywhere.
  static AmbiguityFamily singleton(TransitionKernelTable reference);

  /// Finitely many candidate kernels; the adversary picks rows from any
  /// member independently per (t, s, a).
  static AmbiguityFamily finite_set(std::vector<TransitionKernelTable> members);

  /// W1 ball of the given radius around a table-backed reference kernel.
  static AmbiguityFamily wasserstein_ball(TransitionKernelTable reference,
                                          double radius);

  /// W1 ball around a generated (possibly mu-dependent) reference row.
  static AmbiguityFamily wasserstein_ball(KernelGenerator reference,
                                          double radius, int horizon,
                                          int num_states, int num_actions);

  AmbiguityKind kind(int t) const { return kinds_[t]; }
  double radius() const { return radius_; }
  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  /// True when the family cannot deviate from its reference (singleton, or
  /// a ball of radius zero).
  bool is_effectively_singleton() const;

  /// Reference row at (t, s, a, mu); for finite sets, the first member.
  DiscreteDistribution reference_row(int t, int s, int a,
                                     const DiscreteDistribution& mu) const;

  /// The table behind the reference rows, when there is one. Generator-backed
  /// families return nullptr.
  const TransitionKernelTable* reference_table() const;

  const std::vector<TransitionKernelTable>& members() const { return members_; }

  /// Materializes the constraint set at (t, s, a, mu). The cost matrix is
  /// supplied by the caller (derived from the state coordinates) and must
  /// outlive the returned instance.
  AmbiguityInstance instance(int t, int s, int a,
                             const DiscreteDistribution& mu,
                             const CostMatrix& state_cost) const;

 private:
  AmbiguityFamily() = default;

  std::vector<AmbiguityKind> kinds_;
  int horizon_ = 0, num_states_ = 0, num_actions_ = 0;
  double radius_ = 0.0;
  std::optional<TransitionKernelTable> reference_table_;
  KernelGenerator generator_;
  std::vector<TransitionKernelTable> members_;
};

}  // namespace rmfg
