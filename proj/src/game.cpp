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

#include "rmfg/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rmfg {

GameSpec::GameSpec(FiniteSpace states, FiniteSpace actions, int horizon,
                   DiscreteDistribution initial, RewardModel reward,
                   AmbiguityFamily ambiguity)
    : states_(std::move(states)),
      actions_(std::move(actions)),
      horizon_(horizon),
      initial_(std::move(initial)),
      reward_(std::move(reward)),
      ambiguity_(std::move(ambiguity)),
      state_cost_(CostMatrix::euclidean(states_)) {
  if (horizon_ < 1) throw std::invalid_argument("GameSpec: horizon must be >= 1");
  if (initial_.size() != states_.size())
    throw std::invalid_argument("GameSpec: initial law not on the state space");
  if (ambiguity_.horizon() != horizon_ ||
      ambiguity_.num_states() != states_.size() ||
      ambiguity_.num_actions() != actions_.size())
    throw std::invalid_argument("GameSpec: ambiguity family shape mismatch");
  if (const TableReward* t = reward_.table()) {
    if (t->num_states != states_.size() || t->num_actions != actions_.size())
      throw std::invalid_argument("GameSpec: reward table shape mismatch");
  }
}

GameSpec make_crowd_game(double lambda, double c,
                         const DiscreteDistribution& initial, int horizon) {
  if (lambda < 0.0) throw std::invalid_argument("make_crowd_game: lambda < 0");
  if (c <= 0.0) throw std::invalid_argument("make_crowd_game: c <= 0");
  if (initial.size() != 5)
    throw std::invalid_argument("make_crowd_game: initial law must live on {0..4}");
  if (horizon < 1) throw std::invalid_argument("make_crowd_game: horizon < 1");

  FiniteSpace states = FiniteSpace::grid_1d({0, 1, 2, 3, 4});
  FiniteSpace actions = FiniteSpace::grid_1d({-1, 0, 1});

  // Random-walk reference: next = s + a + eps for eps uniform on {-1,0,1},
  // with each branch that leaves the grid rerouted to s independently.
  TransitionKernelTable reference(horizon, 5, 3);
  for (int t = 0; t < horizon; ++t) {
    for (int s = 0; s < 5; ++s) {
      for (int a = 0; a < 3; ++a) {
        std::vector<double> row(5, 0.0);
        const int shift = a - 1;
        for (int eps = -1; eps <= 1; ++eps) {
          const int next = s + shift + eps;
          row[(next >= 0 && next <= 4) ? next : s] += 1.0 / 3.0;
        }
        reference.set(t, s, a, DiscreteDistribution(std::move(row)));
      }
    }
  }

  return GameSpec(std::move(states), std::move(actions), horizon, initial,
                  RewardModel(CrowdReward{c}),
                  AmbiguityFamily::wasserstein_ball(std::move(reference), lambda));
}

namespace {

std::string row_name(const GameSpec& spec, int t, int s, int a) {
  std::ostringstream os;
  os << "t=" << t << " s=" << spec.states().label(s)
     << " a=" << spec.actions().label(a);
  return os.str();
}

// Deterministic sample of population measures: every vertex, the uniform
// law, vertex/uniform blends, and the game's initial law.
std::vector<DiscreteDistribution> measure_samples(const GameSpec& spec) {
  const int n = spec.num_states();
  std::vector<DiscreteDistribution> mus;
  for (int i = 0; i < n; ++i) mus.push_back(DiscreteDistribution::point_mass(i, n));
  mus.push_back(DiscreteDistribution::uniform(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(n, 0.5 / n);
    w[i] += 0.5;
    mus.push_back(DiscreteDistribution::normalized(std::move(w)));
  }
  mus.push_back(spec.initial());
  return mus;
}

}  // namespace

bool DiagnosticsReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const DiagnosticCheck& c) { return c.passed; });
}

std::vector<std::string> DiagnosticsReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name + ": " + c.detail);
  return out;
}

DiagnosticsReport validate_assumptions(const GameSpec& spec) {
  DiagnosticsReport report;
  const int n_s = spec.num_states();
  const int n_a = spec.num_actions();
  const auto mus = measure_samples(spec);

  // (a) Every stored distribution row is a simplex point.
  {
    DiagnosticCheck check{"simplex-rows", true, false, ""};
    if (!spec.initial().is_valid_simplex()) {
      check.passed = false;
      check.detail = "initial law off the simplex; ";
    }
    const DiscreteDistribution uniform = DiscreteDistribution::uniform(n_s);
    auto verify_table = [&](const TransitionKernelTable& table,
                            const std::string& what) {
      for (int t = 0; t < table.horizon(); ++t)
        for (int s = 0; s < n_s; ++s)
          for (int a = 0; a < n_a; ++a)
            if (!table.at(t, s, a).is_valid_simplex()) {
              check.passed = false;
              check.detail += what + " row " + row_name(spec, t, s, a) +
                              " off the simplex; ";
            }
    };
    if (const TransitionKernelTable* ref = spec.ambiguity().reference_table())
      verify_table(*ref, "reference kernel");
    for (const auto& member : spec.ambiguity().members())
      verify_table(member, "member kernel");
    if (!spec.ambiguity().reference_table() && spec.ambiguity().members().empty()) {
      for (int t = 0; t < spec.horizon(); ++t)
        for (int s = 0; s < n_s; ++s)
          for (int a = 0; a < n_a; ++a)
            if (!spec.ambiguity().reference_row(t, s, a, uniform).is_valid_simplex()) {
              check.passed = false;
              check.detail += "generated reference row " + row_name(spec, t, s, a) +
                              " off the simplex; ";
            }
    }
    if (check.passed) check.detail = "all stored rows valid";
    report.checks.push_back(std::move(check));
  }

  // (b) Reward boundedness. For the crowd reward the certified constant is
  // 17/4 + max{-log c, log(1 + c)}; table rewards are scanned against their
  // declared bound when one is present.
  {
    DiagnosticCheck check{"reward-bound", true, false, ""};
    double bound = 0.0;
    bool have_declared = false;
    if (const CrowdReward* crowd = spec.reward().crowd()) {
      bound = 17.0 / 4.0 + std::max(-std::log(crowd->c), std::log1p(crowd->c));
      have_declared = true;
    } else if (const TableReward* table = spec.reward().table()) {
      if (table->declared_bound) {
        bound = *table->declared_bound;
        have_declared = true;
      }
    }
    double observed = 0.0;
    for (int s = 0; s < n_s; ++s)
      for (int a = 0; a < n_a; ++a)
        for (int s2 = 0; s2 < n_s; ++s2)
          for (const auto& mu : mus) {
            const double r = spec.reward_eval(s, a, s2, mu);
            if (!std::isfinite(r)) {
              check.passed = false;
              check.detail = "non-finite reward at " + row_name(spec, 0, s, a);
            } else {
              observed = std::max(observed, std::abs(r));
            }
          }
    if (have_declared) {
      report.reward_bound = bound;
      if (check.passed && observed > bound + 1e-9) {
        check.passed = false;
        std::ostringstream os;
        os << "observed |r| = " << observed << " exceeds bound " << bound;
        check.detail = os.str();
      } else if (check.passed) {
        std::ostringstream os;
        os << "|r| <= " << bound << " on the sampled grid (observed " << observed
           << ")";
        check.detail = os.str();
      }
    } else {
      report.reward_bound = observed;
      if (check.passed) {
        std::ostringstream os;
        os << "no declared bound; observed |r| = " << observed;
        check.detail = os.str();
      }
    }
    report.checks.push_back(std::move(check));
  }

  // (c) Measure-independence of the ambiguity sets. A W1 ball whose
  // reference ignores mu satisfies the continuity assumption with constant
  // zero; a mu-dependent generator is beyond this certificate.
  {
    DiagnosticCheck check{"ambiguity-mu-independence", true, false, ""};
    bool table_backed = spec.ambiguity().reference_table() != nullptr ||
                        !spec.ambiguity().members().empty();
    if (table_backed) {
      check.detail = "reference rows are stored tables, independent of mu";
    } else {
      bool independent = true;
      for (int t = 0; t < spec.horizon() && independent; ++t)
        for (int s = 0; s < n_s && independent; ++s)
          for (int a = 0; a < n_a && independent; ++a) {
            const auto base = spec.ambiguity().reference_row(t, s, a, mus.front());
            for (size_t m = 1; m < mus.size(); ++m) {
              if (!(spec.ambiguity().reference_row(t, s, a, mus[m]) == base)) {
                independent = false;
                break;
              }
            }
          }
      if (independent) {
        check.detail = "generated reference rows identical across sampled measures";
      } else {
        check.unchecked = true;
        check.detail =
            "unchecked: reference rows vary with mu, continuity constant "
            "not certified";
      }
    }
    report.checks.push_back(std::move(check));
  }

  return report;
}

}  // namespace rmfg
