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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmfg/game.hpp"
#include "rmfg/mfe.hpp"
#include "rmfg/policy.hpp"

namespace rmfg {

/// One Markov policy per agent. Symmetric profiles and single-agent
/// deviations are the two shapes that actually occur.
class ProfilePolicy {
 public:
  static ProfilePolicy symmetric(const MarkovPolicy& policy, int num_agents);
  /// All agents follow base except `deviant`, who follows `deviation`.
  static ProfilePolicy deviated(const MarkovPolicy& base, int num_agents,
                                int deviant, const MarkovPolicy& deviation);

  int num_agents() const { return static_cast<int>(policies_.size()); }
  const MarkovPolicy& agent(int i) const { return policies_[i]; }

 private:
  explicit ProfilePolicy(std::vector<MarkovPolicy> p) : policies_(std::move(p)) {}
  std::vector<MarkovPolicy> policies_;
};

/// Values and diagnostics for one agent of the N-agent game. Fields are
/// optional because not every method produces every number.
struct NAgentReport {
  int num_agents = 0;
  int agent = 0;
  std::optional<double> exact_value;
  std::optional<double> mc_estimate;
  std::optional<double> mc_stderr;
  std::optional<double> nash_gap;
  long paths = 0;
  std::uint64_t seed = 0;
  /// Exact recursions carry certified = true only when no heuristic inner
  /// step was involved (singleton sets, or horizon too short to couple).
  bool certified = true;
  /// Monte Carlo columns come from the plug-in adversary, a surrogate for
  /// the exact per-agent worst case.
  bool surrogate = false;
  /// Deviation search restricted to deterministic policies is exhaustive
  /// only without model uncertainty; otherwise the gap is a lower bound.
  bool gap_is_lower_bound = false;
  std::string method;
};

struct ExactValueOptions {
  int max_agents = 3;
  /// Random restarts of the coordinate descent on the coupled stages.
  int restarts = 16;
  int max_sweeps = 200;
  std::uint64_t seed = 0x5eed5eed5eedULL;
  /// When non-null, receives the first restart's per-sweep objectives of
  /// the last coupled stage entry solved (test hook for the monotone
  /// descent property).
  std::vector<double>* descent_trace = nullptr;
};

struct ExactValue {
  double value = 0.0;
  bool certified = true;
};

/// Exact worst-case value of agent i under a fixed policy profile, by
/// backward recursion on the product state-action space. The terminal stage
/// decouples into one per-agent inner problem and is always exact; earlier
/// stages couple the agents through the continuation, and their infimum
/// over the product of ambiguity sets is located by per-agent coordinate
/// descent with random restarts (exact again when the sets are singletons).
ExactValue fixed_policy_value_exact(const GameSpec& spec, int num_agents,
                                    const ProfilePolicy& profile, int agent,
                                    const ExactValueOptions& opts = {});

struct BestResponseOptions {
  int max_agents = 3;
  /// Refuse enumerations larger than this many candidate policies.
  std::uint64_t max_candidates = 1u << 20;
  ExactValueOptions exact;
};

/// Nash gap of the symmetric profile (pi*, ..., pi*) for agent i: the best
/// deterministic own-state Markov deviation minus the symmetric value, by
/// full enumeration of the |A|^(|S| T) candidates. Without model
/// uncertainty a deterministic best response exists, so the gap is exact;
/// with uncertainty the report flags it as a lower bound.
NAgentReport best_response_gap(const GameSpec& spec, int num_agents, int agent,
                               const Equilibrium& eq,
                               const BestResponseOptions& opts = {});

/// Monte Carlo estimate of agent i's value under the plug-in adversary:
/// every agent transitions through the equilibrium worst-case kernel
/// re-evaluated at the running empirical state distribution. Identical
/// seeds give identical estimates for any thread count.
NAgentReport simulate_plugin(const GameSpec& spec, int num_agents,
                             const ProfilePolicy& profile,
                             const Equilibrium& eq, long paths,
                             std::uint64_t seed, int threads = 1);

/// Per-time discrepancy between the simulated law of agent 1's transition
/// tuple (s_t, a_t, s_{t+1}, empirical measure) and the mean-field law
/// under the equilibrium: the max over indicator test functions on
/// S x A x S and the mean W1 distance of the empirical measure from mu*_t.
struct ChaosRow {
  int t = 0;
  double indicator_gap = 0.0;
  double mu_marginal_w1 = 0.0;
  double discrepancy = 0.0;  // max of the two columns
};

std::vector<ChaosRow> chaos_diagnostic(const GameSpec& spec, int num_agents,
                                       const ProfilePolicy& profile,
                                       const Equilibrium& eq, long paths,
                                       std::uint64_t seed, int threads = 1);

}  // namespace rmfg
