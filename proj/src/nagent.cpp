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

#include "rmfg/nagent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rmfg/inner.hpp"
#include "rmfg/rng.hpp"
#include "rmfg/transport.hpp"

namespace rmfg {

namespace {

// Mixed-radix helpers over product states/actions: index <-> digit tuples.
struct ProductSpace {
  int base = 0;    // per-agent alphabet size
  int agents = 0;
  long size = 1;   // base^agents

  ProductSpace(int base, int agents) : base(base), agents(agents) {
    for (int i = 0; i < agents; ++i) size *= base;
  }
  int digit(long index, int agent) const {
    for (int i = 0; i < agent; ++i) index /= base;
    return static_cast<int>(index % base);
  }
  void decode(long index, std::vector<int>& out) const {
    for (int i = 0; i < agents; ++i) {
      out[i] = static_cast<int>(index % base);
      index /= base;
    }
  }
};

DiscreteDistribution empirical_measure(const std::vector<int>& states, int n_s) {
  std::vector<double> w(n_s, 0.0);
  const double unit = 1.0 / static_cast<double>(states.size());
  for (int s : states) w[s] += unit;
  return DiscreteDistribution(std::move(w));
}

void check_agent_count(int num_agents, int max_agents) {
  if (num_agents < 1)
    throw std::invalid_argument("n-agent game: need at least one agent");
  if (num_agents > max_agents)
    throw std::invalid_argument(
        "n-agent game: exact recursion rejected for N = " +
        std::to_string(num_agents) + " > " + std::to_string(max_agents) +
        " (product space too large)");
}

// Feasible random start inside the ambiguity set: blend the reference
// toward a random simplex point, scaled to stay inside the W1 ball.
DiscreteDistribution random_feasible(const AmbiguityInstance& set,
                                     CounterRng& rng) {
  if (set.kind == AmbiguityKind::kFiniteSet) {
    const int pick = static_cast<int>(rng.next_unit() * set.members.size());
    return set.members[std::min<int>(pick, set.members.size() - 1)];
  }
  if (set.kind == AmbiguityKind::kSingleton || set.radius == 0.0)
    return set.reference;
  const int n = set.reference.size();
  std::vector<double> raw(n);
  for (int k = 0; k < n; ++k) raw[k] = 1e-9 - std::log(1.0 - rng.next_unit());
  const DiscreteDistribution corner = DiscreteDistribution::normalized(std::move(raw));
  const double dist = w1_lp(corner, set.reference, *set.cost).value;
  const double theta =
      dist <= set.radius ? rng.next_unit()
                         : rng.next_unit() * set.radius / dist;
  std::vector<double> blend(n);
  for (int k = 0; k < n; ++k)
    blend[k] = (1.0 - theta) * set.reference[k] + theta * corner[k];
  return DiscreteDistribution(std::move(blend));
}

// Minimizes the multilinear objective sum_{s'} g(s') prod_j P_j(s'_j) over
// the product of per-agent ambiguity sets by coordinate descent: each pass
// solves the exact per-agent inner problem with the others frozen. Exact
// when every set is a singleton (one pass, nothing to iterate); otherwise a
// stationary value, taken over random restarts.
struct CoupledStageSolver {
  const ProductSpace& next_states;
  const std::vector<double>& g;           // objective over product next-states
  const std::vector<AmbiguityInstance>& sets;
  int n_s;

  double solve(bool all_singleton, const ExactValueOptions& opts,
               std::uint64_t restart_stream, bool* used_descent) const {
    const int agents = next_states.agents;
    std::vector<DiscreteDistribution> rows(agents);
    for (int j = 0; j < agents; ++j) rows[j] = sets[j].reference;
    if (all_singleton) {
      if (used_descent) *used_descent = false;
      return evaluate(rows);
    }
    if (used_descent) *used_descent = true;
    if (opts.descent_trace) opts.descent_trace->clear();

    double best = std::numeric_limits<double>::infinity();
    const int restarts = std::max(opts.restarts, 1);
    for (int r = 0; r < restarts; ++r) {
      if (r > 0) {
        CounterRng rng(opts.seed, restart_stream * 1024 + r);
        for (int j = 0; j < agents; ++j) rows[j] = random_feasible(sets[j], rng);
      } else {
        for (int j = 0; j < agents; ++j) rows[j] = sets[j].reference;
      }
      double value = evaluate(rows);
      if (opts.descent_trace && r == 0) opts.descent_trace->push_back(value);
      for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        for (int j = 0; j < agents; ++j) {
          const auto f = partial_objective(rows, j);
          auto sol = worst_case_expectation(f, sets[j]);
          rows[j] = std::move(sol.minimizer);
        }
        const double next_value = evaluate(rows);
        // Each pass minimizes the exact partial objective, so the total can
        // only go down (modulo round-off).
        if (next_value > value + 1e-9)
          throw std::logic_error("coordinate descent failed to descend");
        const double improved = value - next_value;
        value = next_value;
        if (opts.descent_trace && r == 0) opts.descent_trace->push_back(value);
        if (improved <= 1e-13) break;
      }
      best = std::min(best, value);
    }
    return best;
  }

  double evaluate(const std::vector<DiscreteDistribution>& rows) const {
    double acc = 0.0;
    std::vector<int> digits(next_states.agents);
    for (long idx = 0; idx < next_states.size; ++idx) {
      next_states.decode(idx, digits);
      double prob = 1.0;
      for (int j = 0; j < next_states.agents; ++j) prob *= rows[j][digits[j]];
      if (prob != 0.0) acc += g[idx] * prob;
    }
    return acc;
  }

  // Linear coefficients of agent j's row with the others frozen.
  std::vector<double> partial_objective(const std::vector<DiscreteDistribution>& rows,
                                        int j) const {
    std::vector<double> f(n_s, 0.0);
    std::vector<int> digits(next_states.agents);
    for (long idx = 0; idx < next_states.size; ++idx) {
      next_states.decode(idx, digits);
      double prob = 1.0;
      for (int l = 0; l < next_states.agents; ++l) {
        if (l == j) continue;
        prob *= rows[l][digits[l]];
      }
      if (prob != 0.0) f[digits[j]] += g[idx] * prob;
    }
    return f;
  }
};

}  // namespace

ProfilePolicy ProfilePolicy::symmetric(const MarkovPolicy& policy,
                                       int num_agents) {
  if (num_agents < 1)
    throw std::invalid_argument("ProfilePolicy: need at least one agent");
  return ProfilePolicy(std::vector<MarkovPolicy>(num_agents, policy));
}

ProfilePolicy ProfilePolicy::deviated(const MarkovPolicy& base, int num_agents,
                                      int deviant,
                                      const MarkovPolicy& deviation) {
  if (deviant < 0 || deviant >= num_agents)
    throw std::invalid_argument("ProfilePolicy: deviant index out of range");
  std::vector<MarkovPolicy> policies(num_agents, base);
  policies[deviant] = deviation;
  return ProfilePolicy(std::move(policies));
}

ExactValue fixed_policy_value_exact(const GameSpec& spec, int num_agents,
                                    const ProfilePolicy& profile, int agent,
                                    const ExactValueOptions& opts) {
  check_agent_count(num_agents, opts.max_agents);
  if (profile.num_agents() != num_agents)
    throw std::invalid_argument("fixed_policy_value_exact: profile size mismatch");
  if (agent < 0 || agent >= num_agents)
    throw std::invalid_argument("fixed_policy_value_exact: agent out of range");

  const int T = spec.horizon();
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();
  const ProductSpace ps(n_s, num_agents);
  const ProductSpace pa(n_a, num_agents);

  // Empirical measures and per-state digit tuples, shared across stages.
  std::vector<std::vector<int>> state_digits(ps.size, std::vector<int>(num_agents));
  std::vector<DiscreteDistribution> empiricals(ps.size);
  for (long si = 0; si < ps.size; ++si) {
    ps.decode(si, state_digits[si]);
    empiricals[si] = empirical_measure(state_digits[si], n_s);
  }

  bool certified = true;
  std::vector<double> q_next;  // J_{t+1} over (product state, product action)
  std::vector<double> q(static_cast<size_t>(ps.size) * pa.size, 0.0);
  std::vector<int> action_digits(num_agents);

  for (int t = T - 1; t >= 0; --t) {
    // Continuation integrated over the profile's next-stage actions.
    std::vector<double> w_next(ps.size, 0.0);
    if (t + 1 < T) {
      for (long si = 0; si < ps.size; ++si) {
        double acc = 0.0;
        for (long ai = 0; ai < pa.size; ++ai) {
          pa.decode(ai, action_digits);
          double prob = 1.0;
          for (int j = 0; j < num_agents; ++j)
            prob *= profile.agent(j).at(t + 1, state_digits[si][j])[action_digits[j]];
          if (prob != 0.0)
            acc += prob * q_next[static_cast<size_t>(si) * pa.size + ai];
        }
        w_next[si] = acc;
      }
    }

    for (long si = 0; si < ps.size; ++si) {
      const auto& digits = state_digits[si];
      const DiscreteDistribution& emp = empiricals[si];
      for (long ai = 0; ai < pa.size; ++ai) {
        pa.decode(ai, action_digits);

        std::vector<AmbiguityInstance> sets;
        sets.reserve(num_agents);
        bool all_singleton = true;
        for (int j = 0; j < num_agents; ++j) {
          sets.push_back(spec.ambiguity_instance(t, digits[j], action_digits[j], emp));
          const auto& set = sets.back();
          all_singleton = all_singleton &&
                          (set.kind == AmbiguityKind::kSingleton ||
                           (set.kind == AmbiguityKind::kWassersteinBall &&
                            set.radius == 0.0) ||
                           (set.kind == AmbiguityKind::kFiniteSet &&
                            set.members.size() == 1));
        }

        double value = 0.0;
        if (t == T - 1) {
          // The integrand depends only on agent i's next state, so the
          // product infimum collapses to one per-agent inner problem.
          std::vector<double> f(n_s);
          for (int s2 = 0; s2 < n_s; ++s2)
            f[s2] = spec.reward_eval(digits[agent], action_digits[agent], s2, emp);
          value = worst_case_expectation(f, sets[agent]).value;
        } else if (num_agents == 1) {
          // Nothing couples: one agent, one exact inner problem.
          std::vector<double> g(n_s);
          for (int s2 = 0; s2 < n_s; ++s2)
            g[s2] = spec.reward_eval(digits[agent], action_digits[agent], s2, emp) +
                    w_next[s2];
          value = worst_case_expectation(g, sets[agent]).value;
        } else {
          std::vector<double> g(ps.size);
          std::vector<int> next_digits(num_agents);
          for (long ni = 0; ni < ps.size; ++ni) {
            ps.decode(ni, next_digits);
            g[ni] = spec.reward_eval(digits[agent], action_digits[agent],
                                     next_digits[agent], emp) +
                    w_next[ni];
          }
          CoupledStageSolver solver{ps, g, sets, n_s};
          bool used_descent = false;
          const std::uint64_t stream =
              (static_cast<std::uint64_t>(t) * ps.size + si) * pa.size + ai;
          value = solver.solve(all_singleton, opts, stream, &used_descent);
          certified = certified && !used_descent;
        }
        q[static_cast<size_t>(si) * pa.size + ai] = value;
      }
    }
    q_next = q;
  }

  // Integrate the stage-0 table against the i.i.d. initial profile and the
  // time-0 policies.
  double total = 0.0;
  for (long si = 0; si < ps.size; ++si) {
    double w_state = 1.0;
    for (int j = 0; j < num_agents; ++j) w_state *= spec.initial()[state_digits[si][j]];
    if (w_state == 0.0) continue;
    double acc = 0.0;
    for (long ai = 0; ai < pa.size; ++ai) {
      pa.decode(ai, action_digits);
      double prob = 1.0;
      for (int j = 0; j < num_agents; ++j)
        prob *= profile.agent(j).at(0, state_digits[si][j])[action_digits[j]];
      if (prob != 0.0) acc += prob * q_next[static_cast<size_t>(si) * pa.size + ai];
    }
    total += w_state * acc;
  }
  return ExactValue{total, certified};
}

NAgentReport best_response_gap(const GameSpec& spec, int num_agents, int agent,
                               const Equilibrium& eq,
                               const BestResponseOptions& opts) {
  check_agent_count(num_agents, opts.max_agents);
  const int T = spec.horizon();
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();

  // |A|^(|S| T) deterministic own-state deviations.
  std::uint64_t candidates = 1;
  for (int k = 0; k < n_s * T; ++k) {
    candidates *= static_cast<std::uint64_t>(n_a);
    if (candidates > opts.max_candidates)
      throw std::invalid_argument(
          "best_response_gap: enumeration of " + std::to_string(n_a) + "^" +
          std::to_string(n_s * T) + " deterministic policies exceeds the budget of " +
          std::to_string(opts.max_candidates));
  }

  const ProfilePolicy symmetric = ProfilePolicy::symmetric(eq.policy, num_agents);
  const ExactValue base = fixed_policy_value_exact(spec, num_agents, symmetric,
                                                   agent, opts.exact);

  double best_deviation = -std::numeric_limits<double>::infinity();
  bool certified = base.certified;
  std::vector<std::vector<int>> choice(T, std::vector<int>(n_s, 0));
  for (std::uint64_t cand = 0; cand < candidates; ++cand) {
    std::uint64_t rest = cand;
    for (int t = 0; t < T; ++t)
      for (int s = 0; s < n_s; ++s) {
        choice[t][s] = static_cast<int>(rest % n_a);
        rest /= n_a;
      }
    const MarkovPolicy deviation = MarkovPolicy::deterministic(n_a, choice);
    const ProfilePolicy profile =
        ProfilePolicy::deviated(eq.policy, num_agents, agent, deviation);
    const ExactValue value =
        fixed_policy_value_exact(spec, num_agents, profile, agent, opts.exact);
    certified = certified && value.certified;
    if (value.value > best_deviation) best_deviation = value.value;
  }

  NAgentReport report;
  report.num_agents = num_agents;
  report.agent = agent;
  report.exact_value = base.value;
  report.nash_gap = best_deviation - base.value;
  report.certified = certified;
  report.gap_is_lower_bound = spec.has_model_uncertainty();
  report.method = "exact-enumeration";
  return report;
}

namespace {

// Shared simulation core: runs paths [begin, end) and hands each path's
// cumulative reward for the tracked agent to `record`, plus optionally the
// per-time transition tuples to `observe`.
struct PluginSimulator {
  const GameSpec& spec;
  const ProfilePolicy& profile;
  const Equilibrium& eq;
  int num_agents;
  std::uint64_t seed;

  template <typename Observe>
  double run_path(long path, Observe&& observe) const {
    const int T = spec.horizon();
    const int n_s = spec.num_states();
    const int n_a = spec.num_actions();
    CounterRng rng(seed, static_cast<std::uint64_t>(path));

    std::vector<int> states(num_agents);
    for (int j = 0; j < num_agents; ++j) states[j] = rng.sample(spec.initial());
    std::vector<int> actions(num_agents);
    std::vector<int> next_states(num_agents);

    double payoff = 0.0;
    for (int t = 0; t < T; ++t) {
      const DiscreteDistribution emp = empirical_measure(states, n_s);
      for (int j = 0; j < num_agents; ++j)
        actions[j] = rng.sample(profile.agent(j).at(t, states[j]));

      // Plug-in adversary: the equilibrium worst-case kernel re-evaluated
      // at the running empirical measure. Agents sharing (s, a) at this
      // step share the row, so solve each pair once.
      std::vector<DiscreteDistribution> row_cache(
          static_cast<size_t>(n_s) * n_a);
      std::vector<char> cached(static_cast<size_t>(n_s) * n_a, 0);
      const std::vector<double>* v_next =
          t + 1 < T ? &eq.solve.state_values[t + 1] : nullptr;
      std::vector<double> f(n_s);
      for (int j = 0; j < num_agents; ++j) {
        const size_t key = static_cast<size_t>(states[j]) * n_a + actions[j];
        if (!cached[key]) {
          for (int s2 = 0; s2 < n_s; ++s2)
            f[s2] = spec.reward_eval(states[j], actions[j], s2, emp) +
                    (v_next != nullptr ? (*v_next)[s2] : 0.0);
          const auto set = spec.ambiguity_instance(t, states[j], actions[j], emp);
          row_cache[key] = worst_case_expectation(f, set).minimizer;
          cached[key] = 1;
        }
        next_states[j] = rng.sample(row_cache[key]);
      }

      payoff += spec.reward_eval(states[0], actions[0], next_states[0], emp);
      observe(t, states[0], actions[0], next_states[0], emp);
      states = next_states;
    }
    return payoff;
  }
};

}  // namespace

NAgentReport simulate_plugin(const GameSpec& spec, int num_agents,
                             const ProfilePolicy& profile,
                             const Equilibrium& eq, long paths,
                             std::uint64_t seed, int threads) {
  if (paths < 1) throw std::invalid_argument("simulate_plugin: paths must be >= 1");
  if (num_agents < 1)
    throw std::invalid_argument("simulate_plugin: need at least one agent");
  if (profile.num_agents() != num_agents)
    throw std::invalid_argument("simulate_plugin: profile size mismatch");

  PluginSimulator sim{spec, profile, eq, num_agents, seed};
  std::vector<double> payoffs(static_cast<size_t>(paths), 0.0);
  auto worker = [&](long begin, long end) {
    for (long path = begin; path < end; ++path)
      payoffs[static_cast<size_t>(path)] =
          sim.run_path(path, [](int, int, int, int, const DiscreteDistribution&) {});
  };

  const int workers = std::max(1, std::min<int>(threads, 64));
  if (workers == 1) {
    worker(0, paths);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long begin = w * chunk;
      const long end = std::min(paths, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  const MeanStderr stats = mean_and_stderr(payoffs);
  NAgentReport report;
  report.num_agents = num_agents;
  report.agent = 0;
  report.mc_estimate = stats.mean;
  report.mc_stderr = stats.stderr_;
  report.paths = paths;
  report.seed = seed;
  report.surrogate = spec.has_model_uncertainty();
  report.method = "mc-plugin";
  return report;
}

std::vector<ChaosRow> chaos_diagnostic(const GameSpec& spec, int num_agents,
                                       const ProfilePolicy& profile,
                                       const Equilibrium& eq, long paths,
                                       std::uint64_t seed, int threads) {
  if (paths < 1) throw std::invalid_argument("chaos_diagnostic: paths must be >= 1");
  if (profile.num_agents() != num_agents)
    throw std::invalid_argument("chaos_diagnostic: profile size mismatch");

  const int T = spec.horizon();
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();
  const size_t cells = static_cast<size_t>(n_s) * n_a * n_s;

  struct Accumulator {
    std::vector<double> counts;  // [t][s][a][s'] indicator sums
    std::vector<double> w1_sum;  // per t, sum of W1(empirical, mu*_t)
  };

  PluginSimulator sim{spec, profile, eq, num_agents, seed};
  const int workers = std::max(1, std::min<int>(threads, 64));
  std::vector<Accumulator> accs(workers);
  for (auto& acc : accs) {
    acc.counts.assign(static_cast<size_t>(T) * cells, 0.0);
    acc.w1_sum.assign(T, 0.0);
  }

  std::vector<double> grid(n_s);
  bool sorted_1d = spec.states().is_1d();
  if (sorted_1d) {
    for (int s = 0; s < n_s; ++s) grid[s] = spec.states().coord1(s);
    for (int s = 0; s + 1 < n_s; ++s) sorted_1d = sorted_1d && grid[s] < grid[s + 1];
  }

  auto worker = [&](int w, long begin, long end) {
    Accumulator& acc = accs[w];
    for (long path = begin; path < end; ++path) {
      sim.run_path(path, [&](int t, int s, int a, int s2,
                             const DiscreteDistribution& emp) {
        acc.counts[static_cast<size_t>(t) * cells +
                   (static_cast<size_t>(s) * n_a + a) * n_s + s2] += 1.0;
        acc.w1_sum[t] += sorted_1d
                             ? w1_1d(emp, eq.flow.at(t), grid)
                             : w1_lp(emp, eq.flow.at(t), spec.state_cost()).value;
      });
    }
  };

  if (workers == 1) {
    worker(0, 0, paths);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long begin = w * chunk;
      const long end = std::min(paths, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, w, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  for (int w = 1; w < workers; ++w) {
    for (size_t i = 0; i < accs[0].counts.size(); ++i)
      accs[0].counts[i] += accs[w].counts[i];
    for (int t = 0; t < T; ++t) accs[0].w1_sum[t] += accs[w].w1_sum[t];
  }

  // Mean-field law of (s_t, a_t, s_{t+1}) at the equilibrium:
  // mu*_t(s) pi*_t(a|s) p*_t(s'|s,a).
  std::vector<ChaosRow> rows;
  rows.reserve(T);
  for (int t = 0; t < T; ++t) {
    ChaosRow row;
    row.t = t;
    for (int s = 0; s < n_s; ++s)
      for (int a = 0; a < n_a; ++a)
        for (int s2 = 0; s2 < n_s; ++s2) {
          const double simulated =
              accs[0].counts[static_cast<size_t>(t) * cells +
                             (static_cast<size_t>(s) * n_a + a) * n_s + s2] /
              static_cast<double>(paths);
          const double exact =
              eq.flow.at(t)[s] * eq.policy.at(t, s)[a] * eq.kernel.at(t, s, a)[s2];
          row.indicator_gap = std::max(row.indicator_gap, std::abs(simulated - exact));
        }
    row.mu_marginal_w1 = accs[0].w1_sum[t] / static_cast<double>(paths);
    row.discrepancy = std::max(row.indicator_gap, row.mu_marginal_w1);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rmfg
