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

// Test-only reference implementations. Everything in here is written with
// plain loops, independent of the solver code paths it oracles, so that an
// agreement test means something.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "rmfg/game.hpp"
#include "rmfg/policy.hpp"

namespace rmfg::testing {

// ---------------------------------------------------------------------------
// Closed-form 1-Wasserstein distances for oracle membership checks.

// Sorted 1D support: sum of |CDF differences| times gap widths.
inline double w1_sorted_1d(const std::vector<double>& p,
                           const std::vector<double>& q,
                           const std::vector<double>& coords) {
  double acc = 0.0, fp = 0.0, fq = 0.0;
  for (size_t k = 0; k + 1 < p.size(); ++k) {
    fp += p[k];
    fq += q[k];
    acc += std::abs(fp - fq) * (coords[k + 1] - coords[k]);
  }
  return acc;
}

// All pairwise ground distances equal to one: the cost is the total mass
// that has to move.
inline double w1_equal_cost(const std::vector<double>& p,
                            const std::vector<double>& q) {
  double acc = 0.0;
  for (size_t k = 0; k < p.size(); ++k) acc += std::max(p[k] - q[k], 0.0);
  return acc;
}

// Coordinates with unit pairwise distances for n <= 4 points (segment,
// equilateral triangle, regular tetrahedron).
inline std::vector<std::vector<double>> equal_distance_coords(int n) {
  switch (n) {
    case 1:
      return {{0.0}};
    case 2:
      return {{0.0}, {1.0}};
    case 3:
      return {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    case 4:
      return {{0.0, 0.0, 0.0},
              {1.0, 0.0, 0.0},
              {0.5, std::sqrt(3.0) / 2.0, 0.0},
              {0.5, std::sqrt(3.0) / 6.0, std::sqrt(6.0) / 3.0}};
    default:
      throw std::invalid_argument("equal_distance_coords: n must be 1..4");
  }
}

// ---------------------------------------------------------------------------
// Simplex grid enumeration: every weight vector with entries k_i / steps.

inline void for_each_simplex_grid_point(
    int dims, int steps, const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<int> counts(dims, 0);
  std::vector<double> weights(dims, 0.0);
  std::function<void(int, int)> rec = [&](int index, int remaining) {
    if (index == dims - 1) {
      counts[index] = remaining;
      for (int i = 0; i < dims; ++i)
        weights[i] = static_cast<double>(counts[i]) / steps;
      fn(weights);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      counts[index] = k;
      rec(index + 1, remaining - k);
    }
  };
  rec(0, steps);
}

// Brute-force minimum of f over the grid points of a W1 ball.
inline double grid_ball_minimum(
    const std::vector<double>& f, const std::vector<double>& reference,
    double radius, int steps,
    const std::function<double(const std::vector<double>&)>& w1_to_reference) {
  double best = std::numeric_limits<double>::infinity();
  for_each_simplex_grid_point(
      static_cast<int>(f.size()), steps, [&](const std::vector<double>& p) {
        if (w1_to_reference(p) > radius + 1e-9) return;
        double v = 0.0;
        for (size_t k = 0; k < f.size(); ++k) v += f[k] * p[k];
        best = std::min(best, v);
      });
  (void)reference;
  return best;
}

// ---------------------------------------------------------------------------
// Classical (non-robust) finite-horizon dynamic programming.

struct ClassicalSolution {
  std::vector<std::vector<std::vector<double>>> q;  // [t][s][a]
  std::vector<std::vector<double>> v;               // [t][s]
  std::vector<std::vector<int>> choice;             // argmax, lowest index
  double value = 0.0;                               // against mu0
};

// reward(t, s, a, s2), kernel(t, s, a) -> row over next states.
inline ClassicalSolution classical_value_iteration(
    int horizon, int num_states, int num_actions,
    const std::function<double(int, int, int, int)>& reward,
    const std::function<const std::vector<double>&(int, int, int)>& kernel,
    const std::vector<double>& mu0) {
  ClassicalSolution out;
  out.q.assign(horizon, std::vector<std::vector<double>>(
                            num_states, std::vector<double>(num_actions, 0.0)));
  out.v.assign(horizon, std::vector<double>(num_states, 0.0));
  out.choice.assign(horizon, std::vector<int>(num_states, 0));
  std::vector<double> v_next(num_states, 0.0);
  for (int t = horizon - 1; t >= 0; --t) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        const std::vector<double>& row = kernel(t, s, a);
        double acc = 0.0;
        for (int s2 = 0; s2 < num_states; ++s2)
          acc += (reward(t, s, a, s2) + v_next[s2]) * row[s2];
        out.q[t][s][a] = acc;
      }
      int best = 0;
      for (int a = 1; a < num_actions; ++a)
        if (out.q[t][s][a] > out.q[t][s][best]) best = a;
      out.choice[t][s] = best;
      out.v[t][s] = out.q[t][s][best];
    }
    v_next = out.v[t];
  }
  for (int s = 0; s < num_states; ++s) out.value += mu0[s] * out.v[0][s];
  return out;
}

// Classical mean-field fixed point without uncertainty: value iteration at
// the current flow, then push the argmax policy forward; plain iteration.
struct ClassicalMfg {
  std::vector<std::vector<double>> flow;  // [t][s]
  double value = 0.0;
  bool converged = false;
};

inline ClassicalMfg classical_mfg_solve(
    int horizon, int num_states, int num_actions,
    const std::function<double(int, int, int, const std::vector<double>&)>&
        reward,  // (s, a, s2, mu)
    const std::function<const std::vector<double>&(int, int, int)>& kernel,
    const std::vector<double>& mu0, int max_iter = 1000, double tol = 1e-12) {
  ClassicalMfg out;
  out.flow.assign(horizon, mu0);
  for (int iter = 0; iter < max_iter; ++iter) {
    const auto& flow = out.flow;
    const auto solution = classical_value_iteration(
        horizon, num_states, num_actions,
        [&](int t, int s, int a, int s2) { return reward(s, a, s2, flow[t]); },
        kernel, mu0);
    std::vector<std::vector<double>> next_flow(horizon, std::vector<double>(num_states, 0.0));
    next_flow[0] = mu0;
    for (int t = 0; t + 1 < horizon; ++t) {
      for (int s = 0; s < num_states; ++s) {
        const int a = solution.choice[t][s];
        const std::vector<double>& row = kernel(t, s, a);
        for (int s2 = 0; s2 < num_states; ++s2)
          next_flow[t + 1][s2] += out.flow[t][s] * row[s2];
      }
    }
    double change = 0.0;
    for (int t = 0; t < horizon; ++t)
      for (int s = 0; s < num_states; ++s)
        change = std::max(change, std::abs(next_flow[t][s] - out.flow[t][s]));
    out.flow = std::move(next_flow);
    out.value = solution.value;
    if (change <= tol) {
      out.converged = true;
      // One more value pass so the reported value matches the final flow.
      const auto final_solution = classical_value_iteration(
          horizon, num_states, num_actions,
          [&](int t, int s, int a, int s2) {
            return reward(s, a, s2, out.flow[t]);
          },
          kernel, mu0);
      out.value = final_solution.value;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classical two-agent product chain (no uncertainty): forward evolution of
// the joint state distribution, accumulating agent 1's expected reward with
// the empirical two-point measure inside r.

inline double classical_two_agent_value(const GameSpec& spec,
                                        const MarkovPolicy& pi_agent0,
                                        const MarkovPolicy& pi_agent1) {
  const int T = spec.horizon();
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();

  std::vector<double> joint(static_cast<size_t>(n_s) * n_s, 0.0);
  for (int s1 = 0; s1 < n_s; ++s1)
    for (int s2 = 0; s2 < n_s; ++s2)
      joint[static_cast<size_t>(s1) * n_s + s2] = spec.initial()[s1] * spec.initial()[s2];

  double total = 0.0;
  for (int t = 0; t < T; ++t) {
    std::vector<double> next_joint(static_cast<size_t>(n_s) * n_s, 0.0);
    for (int s1 = 0; s1 < n_s; ++s1) {
      for (int s2 = 0; s2 < n_s; ++s2) {
        const double mass = joint[static_cast<size_t>(s1) * n_s + s2];
        if (mass == 0.0) continue;
        std::vector<double> emp(n_s, 0.0);
        emp[s1] += 0.5;
        emp[s2] += 0.5;
        const DiscreteDistribution mu(std::move(emp));
        for (int a1 = 0; a1 < n_a; ++a1) {
          const double w1 = pi_agent0.at(t, s1)[a1];
          if (w1 == 0.0) continue;
          const DiscreteDistribution row1 =
              spec.ambiguity().reference_row(t, s1, a1, mu);
          for (int a2 = 0; a2 < n_a; ++a2) {
            const double w2 = pi_agent1.at(t, s2)[a2];
            if (w2 == 0.0) continue;
            const DiscreteDistribution row2 =
                spec.ambiguity().reference_row(t, s2, a2, mu);
            for (int n1 = 0; n1 < n_s; ++n1) {
              if (row1[n1] == 0.0) continue;
              total += mass * w1 * w2 * row1[n1] * spec.reward_eval(s1, a1, n1, mu);
              for (int n2 = 0; n2 < n_s; ++n2)
                next_joint[static_cast<size_t>(n1) * n_s + n2] +=
                    mass * w1 * w2 * row1[n1] * row2[n2];
            }
          }
        }
      }
    }
    joint = std::move(next_joint);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Random instance helpers.

inline std::vector<double> random_simplex_point(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> exp_dist(1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = exp_dist(rng) + 1e-12;
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

// Simplex point whose weights are multiples of 1/steps.
inline std::vector<double> random_grid_simplex_point(std::mt19937_64& rng, int n,
                                                     int steps) {
  std::vector<int> counts(n, 0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int k = 0; k < steps; ++k) ++counts[pick(rng)];
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = static_cast<double>(counts[i]) / steps;
  return w;
}

// Random table-reward game on integer-grid spaces with a random reference
// kernel: a W1 ball when radius > 0, otherwise a singleton family.
inline GameSpec random_table_game(std::mt19937_64& rng, int n_s, int n_a,
                                  int horizon, double radius) {
  std::vector<double> coords(n_s);
  for (int i = 0; i < n_s; ++i) coords[i] = i;
  FiniteSpace states = FiniteSpace::grid_1d(coords);
  std::vector<double> action_coords(n_a);
  for (int i = 0; i < n_a; ++i) action_coords[i] = i;
  FiniteSpace actions = FiniteSpace::grid_1d(action_coords);

  std::uniform_real_distribution<double> reward_dist(-1.0, 1.0);
  TableReward table;
  table.num_states = n_s;
  table.num_actions = n_a;
  table.values.resize(static_cast<size_t>(n_s) * n_a * n_s);
  for (double& v : table.values) v = reward_dist(rng);

  TransitionKernelTable reference(horizon, n_s, n_a);
  for (int t = 0; t < horizon; ++t)
    for (int s = 0; s < n_s; ++s)
      for (int a = 0; a < n_a; ++a)
        reference.set(t, s, a,
                      DiscreteDistribution::normalized(
                          random_simplex_point(rng, n_s)));

  AmbiguityFamily family =
      radius > 0.0 ? AmbiguityFamily::wasserstein_ball(reference, radius)
                   : AmbiguityFamily::singleton(reference);
  return GameSpec(std::move(states), std::move(actions), horizon,
                  DiscreteDistribution::normalized(random_simplex_point(rng, n_s)),
                  RewardModel(std::move(table)), std::move(family));
}

}  // namespace rmfg::testing
