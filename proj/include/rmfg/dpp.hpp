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

#include "rmfg/game.hpp"
#include "rmfg/inner.hpp"
#include "rmfg/policy.hpp"

namespace rmfg {

/// Output of one robust backward-induction pass at a fixed measure flow:
/// action-value tables Jhat[t][s][a], state values Vhat[t][s], the
/// worst-case kernel selectors, the optimal (deterministic, tie-broken)
/// policy, and the flow value integral of Vhat[0] against mu_0.
struct SolveResult {
  std::vector<std::vector<std::vector<double>>> q_values;  // Jhat[t][s][a]
  std::vector<std::vector<double>> state_values;           // Vhat[t][s]
  TransitionKernelTable worst_kernel;                      // p*
  MarkovPolicy optimal_policy;                             // pi*
  double flow_value = 0.0;                                 // Vhat(mu_{0:T})
};

/// An equilibrium candidate triple (flow, policy, kernel) to be verified.
struct EquilibriumCandidate {
  MeasureFlow flow;
  MarkovPolicy policy;
  TransitionKernelTable kernel;
};

/// Residuals of the three equilibrium conditions plus the mass the policy
/// places outside the argmax set. All residuals are >= 0; a candidate is
/// accepted at tolerance tau iff every residual is <= tau.
struct ResidualReport {
  double optimality = 0.0;         // |Vhat - integral of Jhat d pi|
  double adversary = 0.0;          // |inner value - integral (r+V) d p*|
  double flow = 0.0;               // Linf gap in the flow equation
  double support_violation = 0.0;  // pi-mass off the argmax set

  double max() const;
  bool accepted(double tau) const { return max() <= tau; }
};

/// Robust backward induction for t = T-1 down to 0:
///   Jhat_t(s, a) = inf over the ambiguity set of
///                  sum_{s'} (r(s, a, s', mu_t) + Vhat_{t+1}(s')) P(s'),
///   Vhat_t(s)    = max_a Jhat_t(s, a),   Vhat_T = 0.
/// The sup over randomized actions is attained at a point mass because the
/// objective is linear in the action distribution, so the stored policy is
/// deterministic with ties broken toward the lowest action index.
SolveResult backward_induction(const GameSpec& spec, const MeasureFlow& flow,
                               InnerBackend backend = InnerBackend::kGreedy);

/// Integral of Vhat_0 against mu_0 from a fresh backward_induction pass.
double value_of_flow(const GameSpec& spec, const MeasureFlow& flow,
                     InnerBackend backend = InnerBackend::kGreedy);

/// Worst-case value of an arbitrary Markov policy at a fixed flow:
///   W_T = 0,
///   W_t(s) = sum_a pi_t(a|s) * inf_P sum_{s'} (r + W_{t+1})(s') P(s'),
/// returning sum_s W_0(s) mu_0(s). The per-action infimum is valid because
/// the adversary's kernel may depend on the realized (s_t, a_t).
double robust_policy_eval(const GameSpec& spec, const MeasureFlow& flow,
                          const MarkovPolicy& policy,
                          InnerBackend backend = InnerBackend::kGreedy);

/// Recomputes backward induction at the candidate flow and reports the four
/// residuals. argmax_tol controls which actions count as maximizers for the
/// support-violation check. Report-only; never throws on a bad candidate.
ResidualReport check_mfe(const GameSpec& spec,
                         const EquilibriumCandidate& candidate,
                         double argmax_tol = 1e-9,
                         InnerBackend backend = InnerBackend::kGreedy);

/// A distribution on state-action pairs, stored as a matrix nu[s][a].
class JointStateAction {
 public:
  JointStateAction(int num_states, int num_actions);
  static JointStateAction from_product(const DiscreteDistribution& mu,
                                       const MarkovPolicy& policy, int t);

  double at(int s, int a) const { return mass_[static_cast<size_t>(s) * num_actions_ + a]; }
  void set(int s, int a, double v) { mass_[static_cast<size_t>(s) * num_actions_ + a] = v; }

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  /// Marginal on states.
  std::vector<double> state_marginal() const;
  /// Conditional action row at s; uniform where the marginal vanishes.
  DiscreteDistribution disintegration(int s) const;

 private:
  int num_states_, num_actions_;
  std::vector<double> mass_;
};

struct FixedPointStage {
  int t = 0;
  bool argmax_supported = true;  // joint mass lives on maximizing actions
  bool flow_consistent = true;   // next marginal is the pushforward
  double off_argmax_mass = 0.0;
  double flow_gap = 0.0;
};

struct FixedPointReport {
  std::vector<FixedPointStage> stages;
  bool passed = false;
};

/// Verifies a sequence of joint state-action laws as a fixed point of the
/// equilibrium correspondence: (B) each nu_t is supported on the argmax set
/// of the recomputed action values wherever its state marginal charges the
/// state, and (C) nu_{0,S} equals the initial law and each next marginal is
/// the current one pushed through the extracted worst-case kernels.
FixedPointReport check_fixed_point(const GameSpec& spec,
                                   const std::vector<JointStateAction>& nu,
                                   double tol = 1e-8,
                                   InnerBackend backend = InnerBackend::kGreedy);

/// The joint laws nu_t = pi_t (x) mu_t induced by a candidate, the natural
/// input to check_fixed_point.
std::vector<JointStateAction> induced_joint_laws(const MeasureFlow& flow,
                                                 const MarkovPolicy& policy);

/// One forward step of the flow equation:
///   out(s') = sum_s sum_a kernel_t(s'|s, a) policy_t(a|s) mu(s).
DiscreteDistribution push_forward(const DiscreteDistribution& mu,
                                  const MarkovPolicy& policy,
                                  const TransitionKernelTable& kernel, int t);

}  // namespace rmfg
