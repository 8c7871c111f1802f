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

#include "rmfg/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "simplex_core.hpp"

namespace rmfg {
namespace {

void check_objective(std::span<const double> f, int expected_size) {
  if (static_cast<int>(f.size()) != expected_size)
    throw std::invalid_argument("worst_case_expectation: objective size mismatch");
  for (double v : f)
    if (!std::isfinite(v))
      throw std::invalid_argument("worst_case_expectation: non-finite objective");
}

InnerSolution solve_singleton(std::span<const double> f,
                              const DiscreteDistribution& reference) {
  InnerSolution out{reference.expectation(f), reference, 0.0};
  return out;
}

InnerSolution solve_finite_set(std::span<const double> f,
                               const std::vector<DiscreteDistribution>& members) {
  if (members.empty())
    throw std::invalid_argument("worst_case_expectation: empty finite set");
  int best = 0;
  double best_value = members[0].expectation(f);
  for (int m = 1; m < static_cast<int>(members.size()); ++m) {
    const double v = members[m].expectation(f);
    if (v < best_value) {
      best_value = v;
      best = m;
    }
  }
  return InnerSolution{best_value, members[best], 0.0};
}

// One destination option for mass sitting at a source: reachable at
// per-unit transport cost `cost` with objective value `value` there.
struct HullVertex {
  double cost;
  double value;
  int target;
};

// A move along one hull edge of one source: the marginal option of pushing
// the source's mass one vertex further out.
struct Move {
  int source;
  int from_vertex;  // index into the source's hull
  double unit_cost;  // > 0
  double unit_gain;  // > 0
  double ratio;      // gain per unit of transport budget
  int to_target;
};

// Lower convex hull of the destination options of source j, starting from
// staying put at (0, f[j]). Only strictly improving, strictly convex
// vertices survive, so the hull edges have strictly decreasing gain/cost
// ratios; collinear intermediates are dropped, which realizes the
// "lowest-f target first" tie-break.
std::vector<HullVertex> source_hull(int j, std::span<const double> f,
                                    const CostMatrix& cost) {
  const int n = static_cast<int>(f.size());
  std::vector<HullVertex> candidates;
  candidates.reserve(n);
  for (int k = 0; k < n; ++k) {
    if (k == j) continue;
    candidates.push_back({cost(j, k), f[k], k});
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.value != b.value) return a.value < b.value;
    return a.target < b.target;
  });

  std::vector<HullVertex> hull;
  hull.push_back({0.0, f[j], j});
  for (const auto& cand : candidates) {
    if (cand.cost == 0.0) {
      // Coincident support points: a free strict improvement replaces the
      // resting vertex outright.
      if (cand.value < hull.front().value) hull.front() = cand;
      continue;
    }
    if (cand.value >= hull.back().value) continue;  // no gain from here on
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Pop b unless a -> b -> cand turns strictly convex.
      if ((b.value - a.value) * (cand.cost - b.cost) >=
          (cand.value - b.value) * (b.cost - a.cost)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    // The survivor of the coincident-cost sort can still tie b exactly.
    if (cand.value < hull.back().value) hull.push_back(cand);
  }
  return hull;
}

InnerSolution solve_ball_greedy(std::span<const double> f,
                                const DiscreteDistribution& reference,
                                double radius, const CostMatrix& cost) {
  const int n = reference.size();

  std::vector<std::vector<HullVertex>> hulls(n);
  std::vector<Move> moves;
  for (int j = 0; j < n; ++j) {
    if (reference[j] <= 0.0) continue;
    hulls[j] = source_hull(j, f, cost);
    for (size_t l = 0; l + 1 < hulls[j].size(); ++l) {
      const auto& a = hulls[j][l];
      const auto& b = hulls[j][l + 1];
      moves.push_back({j, static_cast<int>(l), b.cost - a.cost,
                       a.value - b.value,
                       (a.value - b.value) / (b.cost - a.cost), b.target});
    }
  }

  std::sort(moves.begin(), moves.end(), [&](const Move& a, const Move& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    if (f[a.source] != f[b.source]) return f[a.source] > f[b.source];
    if (f[a.to_target] != f[b.to_target]) return f[a.to_target] < f[b.to_target];
    if (a.source != b.source) return a.source < b.source;
    return a.to_target < b.to_target;
  });

  // Walk the merged moves, advancing each source's full mass along its hull
  // until the transport budget runs out. Ratios strictly decrease within a
  // source, so the global order respects each source's edge order.
  std::vector<int> front(n, 0);
  std::vector<double> split_mass(n, 0.0);  // mass left behind on a partial move
  std::vector<int> split_vertex(n, -1);
  double budget_left = radius;
  double budget_used = 0.0;
  for (const auto& move : moves) {
    if (budget_left <= 0.0) break;
    if (front[move.source] != move.from_vertex) continue;
    const double mass = reference[move.source];
    const double affordable = budget_left / move.unit_cost;
    if (affordable >= mass) {
      front[move.source] = move.from_vertex + 1;
      budget_left -= mass * move.unit_cost;
      budget_used += mass * move.unit_cost;
    } else {
      split_mass[move.source] = mass - affordable;
      split_vertex[move.source] = move.from_vertex;
      front[move.source] = move.from_vertex + 1;
      budget_used += affordable * move.unit_cost;
      budget_left = 0.0;
    }
  }

  std::vector<double> weights(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (reference[j] <= 0.0) continue;
    const double mass = reference[j];
    if (split_vertex[j] >= 0) {
      weights[hulls[j][split_vertex[j]].target] += split_mass[j];
      weights[hulls[j][front[j]].target] += mass - split_mass[j];
    } else {
      weights[hulls[j][front[j]].target] += mass;
    }
  }

  InnerSolution out;
  out.minimizer = DiscreteDistribution(std::move(weights));
  out.value = out.minimizer.expectation(f);
  out.budget_used = budget_used;
  return out;
}

InnerSolution solve_ball_lp(std::span<const double> f,
                            const DiscreteDistribution& reference,
                            double radius, const CostMatrix& cost) {
  const int n = reference.size();

  // Budgeted transport LP: gamma[j][k] >= 0 routes reference mass j -> k,
  // row sums fixed, total transport cost at most radius (slack row), and
  // the objective charges each unit at its destination value.
  detail::LpProblem lp;
  lp.num_rows = n + 1;
  lp.rhs.assign(n + 1, 0.0);
  for (int j = 0; j < n; ++j) lp.rhs[j] = reference[j];
  lp.rhs[n] = radius;

  lp.columns.resize(static_cast<size_t>(n) * n + 1);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      auto& col = lp.columns[static_cast<size_t>(j) * n + k];
      col.cost = f[k];
      col.entries.push_back({j, 1.0});
      if (cost(j, k) != 0.0) col.entries.push_back({n, cost(j, k)});
    }
  }
  lp.columns.back().entries.push_back({n, 1.0});  // budget slack

  std::vector<int> basis(n + 1);
  for (int j = 0; j < n; ++j) basis[j] = j * n + j;  // stay-put plan
  basis[n] = n * n;

  const auto solution = detail::solve_lp(lp, std::move(basis));

  std::vector<double> weights(n, 0.0);
  double spent = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double m = solution.x[static_cast<size_t>(j) * n + k];
      weights[k] += m;
      spent += cost(j, k) * m;
    }
  }

  InnerSolution out;
  out.minimizer = DiscreteDistribution(std::move(weights));
  out.value = out.minimizer.expectation(f);
  out.budget_used = spent;
  return out;
}

}  // namespace

InnerSolution worst_case_expectation(std::span<const double> f,
                                     const AmbiguityInstance& set,
                                     InnerBackend backend) {
  switch (set.kind) {
    case AmbiguityKind::kSingleton:
      check_objective(f, set.reference.size());
      return solve_singleton(f, set.reference);
    case AmbiguityKind::kFiniteSet:
      check_objective(f, set.members.front().size());
      return solve_finite_set(f, set.members);
    case AmbiguityKind::kWassersteinBall: {
      check_objective(f, set.reference.size());
      if (set.radius < 0.0)
        throw std::invalid_argument("worst_case_expectation: negative radius");
      if (set.cost == nullptr)
        throw std::invalid_argument("worst_case_expectation: ball without cost");
      if (set.radius == 0.0) return solve_singleton(f, set.reference);
      if (backend == InnerBackend::kGreedy)
        return solve_ball_greedy(f, set.reference, set.radius, *set.cost);
      return solve_ball_lp(f, set.reference, set.radius, *set.cost);
    }
  }
  throw std::logic_error("worst_case_expectation: unknown set kind");
}

bool ball_membership(const DiscreteDistribution& candidate,
                     const DiscreteDistribution& reference, double radius,
                     const CostMatrix& cost) {
  if (candidate.size() != reference.size())
    throw std::invalid_argument("ball_membership: mismatched supports");
  return w1_lp(candidate, reference, cost).value <= radius + 1e-9;
}

bool set_membership(const DiscreteDistribution& candidate,
                    const AmbiguityInstance& set, double tol) {
  switch (set.kind) {
    case AmbiguityKind::kSingleton:
      return candidate.linf_distance(set.reference) <= tol;
    case AmbiguityKind::kFiniteSet:
      return std::any_of(set.members.begin(), set.members.end(),
                         [&](const DiscreteDistribution& m) {
                           return candidate.linf_distance(m) <= tol;
                         });
    case AmbiguityKind::kWassersteinBall:
      return ball_membership(candidate, set.reference, set.radius, *set.cost);
  }
  return false;
}

}  // namespace rmfg
