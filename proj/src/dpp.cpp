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

#include "rmfg/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmfg {

namespace {

void check_flow(const GameSpec& spec, const MeasureFlow& flow) {
  if (flow.horizon() != spec.horizon())
    throw std::invalid_argument("flow horizon does not match the game");
  if (flow.at(0).size() != spec.num_states())
    throw std::invalid_argument("flow support does not match the state space");
}

// Objective of the inner problem at one (t, s, a): f(s') = r(s,a,s',mu_t)
// + Vnext(s'), with Vnext = 0 at the terminal stage.
std::vector<double> stage_objective(const GameSpec& spec, int s, int a,
                                    const DiscreteDistribution& mu,
                                    const std::vector<double>& v_next) {
  const int n = spec.num_states();
  std::vector<double> f(n);
  for (int s2 = 0; s2 < n; ++s2)
    f[s2] = spec.reward_eval(s, a, s2, mu) + v_next[s2];
  return f;
}

}  // namespace

double ResidualReport::max() const {
  return std::max({optimality, adversary, flow, support_violation});
}

SolveResult backward_induction(const GameSpec& spec, const MeasureFlow& flow,
                               InnerBackend backend) {
  check_flow(spec, flow);
  const int T = spec.horizon();
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();

  SolveResult result;
  result.q_values.assign(T, std::vector<std::vector<double>>(
                                n_s, std::vector<double>(n_a, 0.0)));
  result.state_values.assign(T, std::vector<double>(n_s, 0.0));
  result.worst_kernel = TransitionKernelTable(T, n_s, n_a);
  result.optimal_policy = MarkovPolicy(T, n_s, n_a);

  std::vector<double> v_next(n_s, 0.0);  // terminal values are zero
  for (int t = T - 1; t >= 0; --t) {
    const DiscreteDistribution& mu = flow.at(t);
    for (int s = 0; s < n_s; ++s) {
      for (int a = 0; a < n_a; ++a) {
        const auto f = stage_objective(spec, s, a, mu, v_next);
        const auto set = spec.ambiguity_instance(t, s, a, mu);
        InnerSolution inner;
        try {
          inner = worst_case_expectation(f, set, backend);
        } catch (const std::exception& e) {
          throw std::runtime_error("backward_induction: inner solver failed at t=" +
                                   std::to_string(t) + " s=" + std::to_string(s) +
                                   " a=" + std::to_string(a) + ": " + e.what());
        }
        result.q_values[t][s][a] = inner.value;
        result.worst_kernel.set(t, s, a, std::move(inner.minimizer));
      }
      // The action optimum over randomized choices is attained at a vertex;
      // ties break toward the lowest action index.
      const auto& q_row = result.q_values[t][s];
      int best = 0;
      for (int a = 1; a < n_a; ++a)
        if (q_row[a] > q_row[best]) best = a;
      result.state_values[t][s] = q_row[best];
      result.optimal_policy.set(t, s, DiscreteDistribution::point_mass(best, n_a));
    }
    v_next = result.state_values[t];
  }

  result.flow_value = flow.at(0).expectation(result.state_values[0]);
  return result;
}

double value_of_flow(const GameSpec& spec, const MeasureFlow& flow,
                     InnerBackend backend) {
  return backward_induction(spec, flow, backend).flow_value;
}

double robust_policy_eval(const GameSpec& spec, const MeasureFlow& flow,
                          const MarkovPolicy& policy, InnerBackend backend) {
  check_flow(spec, flow);
  if (policy.horizon() != spec.horizon() ||
      policy.num_states() != spec.num_states() ||
      policy.num_actions() != spec.num_actions())
    throw std::invalid_argument("robust_policy_eval: policy shape mismatch");

  const int T = spec.horizon();
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();

  std::vector<double> w_next(n_s, 0.0);
  std::vector<double> w(n_s, 0.0);
  for (int t = T - 1; t >= 0; --t) {
    const DiscreteDistribution& mu = flow.at(t);
    for (int s = 0; s < n_s; ++s) {
      double acc = 0.0;
      const DiscreteDistribution& row = policy.at(t, s);
      for (int a = 0; a < n_a; ++a) {
        if (row[a] == 0.0) continue;
        const auto f = stage_objective(spec, s, a, mu, w_next);
        const auto set = spec.ambiguity_instance(t, s, a, mu);
        acc += row[a] * worst_case_expectation(f, set, backend).value;
      }
      w[s] = acc;
    }
    w_next = w;
  }
  return flow.at(0).expectation(w_next);
}

DiscreteDistribution push_forward(const DiscreteDistribution& mu,
                                  const MarkovPolicy& policy,
                                  const TransitionKernelTable& kernel, int t) {
  const int n_s = kernel.num_states();
  const int n_a = kernel.num_actions();
  std::vector<double> next(n_s, 0.0);
  for (int s = 0; s < n_s; ++s) {
    if (mu[s] == 0.0) continue;
    const DiscreteDistribution& action_row = policy.at(t, s);
    for (int a = 0; a < n_a; ++a) {
      const double mass = mu[s] * action_row[a];
      if (mass == 0.0) continue;
      const DiscreteDistribution& row = kernel.at(t, s, a);
      for (int s2 = 0; s2 < n_s; ++s2) next[s2] += mass * row[s2];
    }
  }
  return DiscreteDistribution(std::move(next));
}

ResidualReport check_mfe(const GameSpec& spec,
                         const EquilibriumCandidate& candidate,
                         double argmax_tol, InnerBackend backend) {
  check_flow(spec, candidate.flow);
  const int T = spec.horizon();
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();

  const SolveResult fresh = backward_induction(spec, candidate.flow, backend);

  ResidualReport report;
  for (int t = 0; t < T; ++t) {
    const DiscreteDistribution& mu = candidate.flow.at(t);
    const std::vector<double> v_next =
        (t + 1 < T) ? fresh.state_values[t + 1] : std::vector<double>(n_s, 0.0);
    for (int s = 0; s < n_s; ++s) {
      // Optimality: the candidate policy must attain Vhat.
      double policy_value = 0.0;
      for (int a = 0; a < n_a; ++a)
        policy_value += candidate.policy.at(t, s)[a] * fresh.q_values[t][s][a];
      report.optimality = std::max(
          report.optimality, std::abs(fresh.state_values[t][s] - policy_value));

      // Support: mass on actions below the argmax band.
      double off_mass = 0.0;
      for (int a = 0; a < n_a; ++a) {
        if (fresh.q_values[t][s][a] < fresh.state_values[t][s] - argmax_tol)
          off_mass += candidate.policy.at(t, s)[a];
      }
      report.support_violation = std::max(report.support_violation, off_mass);

      // Adversary: the candidate kernel must attain the inner infimum.
      for (int a = 0; a < n_a; ++a) {
        const auto f = stage_objective(spec, s, a, mu, v_next);
        const double attained = candidate.kernel.at(t, s, a).expectation(f);
        report.adversary = std::max(
            report.adversary, std::abs(attained - fresh.q_values[t][s][a]));
      }
    }
  }

  // Flow: mu_0 pinned to the initial law, then the forward equation under
  // the candidate's own (policy, kernel) pair.
  report.flow = candidate.flow.at(0).linf_distance(spec.initial());
  for (int t = 0; t + 1 < T; ++t) {
    const DiscreteDistribution pushed =
        push_forward(candidate.flow.at(t), candidate.policy, candidate.kernel, t);
    report.flow =
        std::max(report.flow, pushed.linf_distance(candidate.flow.at(t + 1)));
  }
  return report;
}

JointStateAction::JointStateAction(int num_states, int num_actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      mass_(static_cast<size_t>(num_states) * num_actions, 0.0) {
  if (num_states <= 0 || num_actions <= 0)
    throw std::invalid_argument("JointStateAction: non-positive dimension");
}

JointStateAction JointStateAction::from_product(const DiscreteDistribution& mu,
                                                const MarkovPolicy& policy,
                                                int t) {
  JointStateAction nu(mu.size(), policy.num_actions());
  for (int s = 0; s < mu.size(); ++s)
    for (int a = 0; a < policy.num_actions(); ++a)
      nu.set(s, a, mu[s] * policy.at(t, s)[a]);
  return nu;
}

std::vector<double> JointStateAction::state_marginal() const {
  std::vector<double> out(num_states_, 0.0);
  for (int s = 0; s < num_states_; ++s)
    for (int a = 0; a < num_actions_; ++a) out[s] += at(s, a);
  return out;
}

DiscreteDistribution JointStateAction::disintegration(int s) const {
  double total = 0.0;
  for (int a = 0; a < num_actions_; ++a) total += at(s, a);
  if (total <= 0.0) return DiscreteDistribution::uniform(num_actions_);
  std::vector<double> row(num_actions_);
  for (int a = 0; a < num_actions_; ++a) row[a] = at(s, a) / total;
  return DiscreteDistribution::normalized(std::move(row));
}

std::vector<JointStateAction> induced_joint_laws(const MeasureFlow& flow,
                                                 const MarkovPolicy& policy) {
  std::vector<JointStateAction> out;
  out.reserve(flow.horizon());
  for (int t = 0; t < flow.horizon(); ++t)
    out.push_back(JointStateAction::from_product(flow.at(t), policy, t));
  return out;
}

FixedPointReport check_fixed_point(const GameSpec& spec,
                                   const std::vector<JointStateAction>& nu,
                                   double tol, InnerBackend backend) {
  const int T = spec.horizon();
  if (static_cast<int>(nu.size()) != T)
    throw std::invalid_argument("check_fixed_point: need one joint law per time");
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();

  // Marginal flow of the candidate and the corresponding value tables.
  std::vector<DiscreteDistribution> marginals;
  marginals.reserve(T);
  for (const auto& joint : nu)
    marginals.push_back(DiscreteDistribution(joint.state_marginal()));
  const MeasureFlow flow{std::vector<DiscreteDistribution>(marginals)};
  const SolveResult fresh = backward_induction(spec, flow, backend);

  FixedPointReport report;
  report.passed = true;
  for (int t = 0; t < T; ++t) {
    FixedPointStage stage;
    stage.t = t;

    // (B) joint mass must sit on maximizing actions.
    for (int s = 0; s < n_s; ++s) {
      for (int a = 0; a < n_a; ++a) {
        if (fresh.q_values[t][s][a] < fresh.state_values[t][s] - tol)
          stage.off_argmax_mass += nu[t].at(s, a);
      }
    }
    stage.argmax_supported = stage.off_argmax_mass <= tol;

    // (C) the marginal chain: the initial law at t = 0, then the
    // pushforward through the extracted worst-case kernels.
    if (t == 0) {
      stage.flow_gap = marginals[0].linf_distance(spec.initial());
    } else {
      std::vector<double> pushed(n_s, 0.0);
      for (int s = 0; s < n_s; ++s)
        for (int a = 0; a < n_a; ++a) {
          const double mass = nu[t - 1].at(s, a);
          if (mass == 0.0) continue;
          const DiscreteDistribution& row = fresh.worst_kernel.at(t - 1, s, a);
          for (int s2 = 0; s2 < n_s; ++s2) pushed[s2] += mass * row[s2];
        }
      double gap = 0.0;
      for (int s2 = 0; s2 < n_s; ++s2)
        gap = std::max(gap, std::abs(pushed[s2] - marginals[t][s2]));
      stage.flow_gap = gap;
    }
    stage.flow_consistent = stage.flow_gap <= tol;

    report.passed = report.passed && stage.argmax_supported && stage.flow_consistent;
    report.stages.push_back(stage);
  }
  return report;
}

}  // namespace rmfg
